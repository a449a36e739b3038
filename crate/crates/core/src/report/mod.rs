//! Machine-readable reports and the verification campaign behind
//! `kummerlab verify`.

pub mod claims;
pub mod cli;

use std::collections::BTreeSet;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub use claims::{ClaimDef, Outcome, CLAIMS};

/// JSON schema every report validates against.
pub const REPORT_SCHEMA: &str = include_str!("schema.json");

/// Seed used when neither `--seed` nor KUMMERLAB_SEED is given.
pub const DEFAULT_SEED: u64 = 20_160_516;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub seed: u64,
    /// Stop the exhaustive code search at m = 14.
    pub quick: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { seed: DEFAULT_SEED, quick: false }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClaimRecord {
    pub id: String,
    pub name: String,
    pub anchor: String,
    pub statement: String,
    pub passed: bool,
    pub detail: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: Vec<String>,
    pub inputs: Value,
    pub seed: u64,
    pub extension_degrees: Vec<u32>,
    pub results: Value,
    pub claims: Vec<ClaimRecord>,
    pub status: Status,
}

impl Report {
    pub fn new(command: Vec<String>, inputs: Value, seed: u64) -> Self {
        Report {
            tool: "kummerlab".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command,
            inputs,
            seed,
            extension_degrees: Vec::new(),
            results: Value::Null,
            claims: Vec::new(),
            status: Status::Pass,
        }
    }

    pub fn add_claim(&mut self, id: &str, name: &str, anchor: &str, statement: &str, passed: bool, detail: Value) {
        self.claims.push(ClaimRecord {
            id: id.into(),
            name: name.into(),
            anchor: anchor.into(),
            statement: statement.into(),
            passed,
            detail,
        });
        if !passed {
            self.status = Status::Fail;
        }
    }

    pub fn add_degrees(&mut self, ds: impl IntoIterator<Item = u32>) {
        let mut all: BTreeSet<u32> = self.extension_degrees.iter().copied().collect();
        all.extend(ds);
        self.extension_degrees = all.into_iter().collect();
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Pretty JSON with a trailing newline. Object keys come out sorted.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Run one registered claim into `report`. Timing goes to stderr only
/// when `verbose` is set.
pub fn run_claim(def: &ClaimDef, cfg: &RunConfig, report: &mut Report, verbose: bool) {
    let t = Instant::now();
    if verbose {
        eprintln!("[{}] {} ...", def.id, def.name);
    }
    let o = (def.run)(cfg);
    if verbose {
        eprintln!("[{}] {} in {:.2?}", def.id, if o.passed { "pass" } else { "FAIL" }, t.elapsed());
    }
    report.add_degrees(o.degrees);
    report.add_claim(def.id, def.name, def.anchor, def.statement, o.passed, o.detail);
}

/// Every claim in order.
pub fn verify_all(cfg: &RunConfig, command: Vec<String>, verbose: bool) -> Report {
    let inputs = serde_json::json!({"claims": "all", "quick": cfg.quick});
    let mut r = Report::new(command, inputs, cfg.seed);
    for def in CLAIMS.iter() {
        run_claim(def, cfg, &mut r, verbose);
    }
    r.results = serde_json::json!({
        "claims_total": r.claims.len(),
        "claims_passed": r.claims.iter().filter(|c| c.passed).count(),
    });
    r
}
