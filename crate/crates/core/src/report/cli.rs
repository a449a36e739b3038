//! Argument grammar and dispatch for the `kummerlab` binary. Kept in the
//! library so tests can drive it in-process.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use super::{claims, run_claim, verify_all, Report, RunConfig, DEFAULT_SEED};
use crate::algebra::Field;
use crate::codes::{g_table, BinaryCode};
use crate::kummer::embed::{embed_any, embed_kummer, Complement};
use crate::kummer::KummerType;
use crate::lattice::{ade_type, root_lattice_a, root_lattice_d, root_lattice_e};
use crate::rdp::{allowed_types, verify_leq5, z_infty_upper_bound, Kind, RdpCollection, RdpType};
use crate::surface::derivation::hamiltonian_derivation;
use crate::surface::{
    classify_derivations, classify_full, covering_derivation, fixed_locus_subgroup_check, normalize, parse_key,
    sample_spec, Branch, Family, SurfaceError, SurfaceSpec,
};
use crate::Lattice;

#[derive(Parser, Debug)]
#[command(name = "kummerlab", version, about = "Exact checks for Kummer lattices, codes and char-2 surfaces")]
pub struct Cli {
    /// Seed for sampled checks.
    #[arg(long, global = true, env = "KUMMERLAB_SEED")]
    pub seed: Option<u64>,
    /// Skip the exhaustive code search above m = 14.
    #[arg(long, global = true)]
    pub quick: bool,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub report: Format,
    /// Progress on stderr.
    #[arg(short, long, global = true)]
    pub verbose: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Invariants of a lattice given by its Gram matrix.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    #[command(subcommand)]
    Codes(CodesCmd),
    #[command(subcommand)]
    Kummer(KummerCmd),
    #[command(subcommand)]
    Surface(SurfaceCmd),
    #[command(subcommand)]
    Rdp(RdpCmd),
    /// Run one claim by name (table1, leq5, ...) or all of them.
    Verify { which: String },
}

#[derive(Subcommand, Debug)]
pub enum LatticeCmd {
    Analyze {
        /// Integer Gram matrix as JSON rows, e.g. [[-2,1],[1,-2]].
        #[arg(long, conflicts_with = "root")]
        gram: Option<String>,
        /// Negative-definite root lattice such as A4, D6, E8.
        #[arg(long)]
        root: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum CodesCmd {
    Golay,
    /// g(m) against f(m) for m up to --max.
    GTable {
        #[arg(long, default_value_t = 17)]
        max: usize,
        #[arg(long, default_value_t = u64::MAX)]
        budget: u64,
    },
    /// Weight distribution of the span of the given words.
    Weights {
        #[arg(long)]
        m: usize,
        /// Comma-separated bit strings, position 0 first.
        #[arg(long)]
        rows: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum KummerCmd {
    /// Roots, ADE types and indices of all five lattices.
    Table,
    Embed {
        #[arg(long = "type")]
        kind: String,
        #[arg(long)]
        sigma: u32,
        /// q4 or q2; tried in that order when omitted.
        #[arg(long)]
        complement: Option<String>,
        #[arg(long)]
        extended: bool,
    },
}

#[derive(Args, Debug)]
pub struct SpecArgs {
    #[arg(long)]
    pub family: String,
    /// Field as e=N for F_(2^N).
    #[arg(long)]
    pub field: String,
    /// Coefficients as h30=0110,h11=1 (digit strings, lowest power first).
    #[arg(long, default_value = "")]
    pub coeffs: String,
}

#[derive(Subcommand, Debug)]
pub enum SurfaceCmd {
    Classify {
        #[command(flatten)]
        spec: SpecArgs,
        /// Branch the result must match.
        #[arg(long)]
        expect: Option<String>,
        /// List the singular points explicitly.
        #[arg(long)]
        points: bool,
    },
    DerivationCheck {
        #[command(flatten)]
        spec: SpecArgs,
        /// Use the Hamiltonian derivation of H instead of the covering one.
        #[arg(long)]
        hamiltonian: bool,
    },
    /// Random member of a branch.
    Sample {
        #[arg(long)]
        family: String,
        #[arg(long)]
        branch: String,
        #[arg(long)]
        field: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum RdpCmd {
    VerifyLeq5 {
        #[arg(long, default_value_t = 16)]
        max: u32,
    },
    /// B-bar dimensions for every legal type of a kind.
    Table {
        #[arg(long = "type")]
        kind: String,
        #[arg(long, default_value_t = 20)]
        max_n: u32,
        #[arg(long, default_value_t = 2)]
        p: u32,
    },
    /// Upper bound for Z_infty of a collection such as "13A_1 + D_4^0".
    Bound {
        #[arg(long)]
        collection: String,
    },
}

/// Exit status and the text destined for stdout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exit {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
struct InputError(String);

impl<E: std::fmt::Display> From<E> for InputError {
    fn from(e: E) -> Self {
        InputError(e.to_string())
    }
}

type Res<T> = Result<T, InputError>;

pub fn run<I, T>(argv: I) -> Exit
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Exit { code, stdout: text, stderr: String::new() }
            } else {
                Exit { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let command: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => return usage(e.to_string()),
    };
    let report = pool.install(|| dispatch(&cli, command));
    match report {
        Err(InputError(msg)) => usage(msg),
        Ok(r) => {
            let text = r.to_json();
            let code = if r.passed() { 0 } else { 1 };
            match &cli.out {
                Some(path) => match std::fs::write(path, &text) {
                    Ok(()) => Exit { code, stdout: String::new(), stderr: String::new() },
                    Err(e) => usage(format!("cannot write {}: {e}", path.display())),
                },
                None => Exit { code, stdout: text, stderr: String::new() },
            }
        }
    }
}

fn usage(msg: String) -> Exit {
    Exit { code: 2, stdout: String::new(), stderr: format!("error: {msg}\n") }
}

fn dispatch(cli: &Cli, command: Vec<String>) -> Res<Report> {
    let cfg = RunConfig { seed: cli.seed.unwrap_or(DEFAULT_SEED), quick: cli.quick };
    match &cli.command {
        Command::Verify { which } => verify(&cfg, which, command, cli.verbose),
        Command::Lattice(c) => lattice(&cfg, c, command),
        Command::Codes(c) => codes(&cfg, c, command),
        Command::Kummer(c) => kummer(&cfg, c, command, cli.verbose),
        Command::Surface(c) => surface(&cfg, c, command),
        Command::Rdp(c) => rdp(&cfg, c, command),
    }
}

fn verify(cfg: &RunConfig, which: &str, command: Vec<String>, verbose: bool) -> Res<Report> {
    if which == "all" {
        return Ok(verify_all(cfg, command, verbose));
    }
    let def = claims::find(which).ok_or_else(|| {
        let names: Vec<&str> = claims::CLAIMS.iter().map(|c| c.name).collect();
        InputError(format!("unknown claim {which}; expected all or one of {}", names.join(", ")))
    })?;
    let mut r = Report::new(command, json!({"claims": which, "quick": cfg.quick}), cfg.seed);
    run_claim(def, cfg, &mut r, verbose);
    r.results = json!({"claims_total": 1, "claims_passed": r.claims.iter().filter(|c| c.passed).count()});
    Ok(r)
}

fn parse_root(s: &str) -> Res<Lattice> {
    let (k, n) = s.split_at(1.min(s.len()));
    let n: usize = n.parse().map_err(|_| InputError(format!("bad root type {s}")))?;
    match (k.to_ascii_uppercase().as_str(), n) {
        ("A", 1..) => Ok(root_lattice_a(n)),
        ("D", 4..) => Ok(root_lattice_d(n)),
        ("E", 6..=8) => Ok(root_lattice_e(n)),
        _ => Err(InputError(format!("bad root type {s}"))),
    }
}

fn lattice(cfg: &RunConfig, c: &LatticeCmd, command: Vec<String>) -> Res<Report> {
    let LatticeCmd::Analyze { gram, root } = c;
    let l = match (gram, root) {
        (Some(g), None) => {
            let rows: Vec<Vec<i64>> = serde_json::from_str(g)?;
            Lattice::from_i64(&rows)?
        }
        (None, Some(r)) => parse_root(r)?,
        _ => return Err(InputError("give exactly one of --gram or --root".into())),
    };
    let gram: Vec<Vec<String>> = l.gram().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
    let mut r = Report::new(command, json!({ "gram": gram }), cfg.seed);
    let sig = l.signature();
    let mut res = json!({
        "rank": l.rank(),
        "determinant": l.determinant().to_string(),
        "even": l.is_even(),
        "signature": sig,
    });
    if sig.null == 0 {
        let dg = l.discriminant_group()?;
        res["discriminant_group"] = serde_json::to_value(dg.summary())?;
        let (el, t2) = l.is_two_elementary_type2()?;
        res["two_elementary"] = json!(el);
        res["type2"] = json!(t2);
    }
    if l.is_negative_definite() {
        let roots = l.roots()?;
        res["root_count"] = json!(2 * roots.len());
        res["root_type"] = json!(ade_type(&l, &roots)?.to_string());
    }
    r.results = res;
    Ok(r)
}

fn codes(cfg: &RunConfig, c: &CodesCmd, command: Vec<String>) -> Res<Report> {
    match c {
        CodesCmd::Golay => {
            let mut r = Report::new(command, json!({}), cfg.seed);
            run_claim(claims::find("golay").expect("registered"), cfg, &mut r, false);
            r.results = r.claims[0].detail.clone();
            Ok(r)
        }
        CodesCmd::GTable { max, budget } => {
            let mut r = Report::new(command, json!({"max": max, "budget": budget}), cfg.seed);
            let rows = g_table(*max, *budget)?;
            for row in &rows {
                let ok = row.g == row.f && row.exhaustive;
                r.add_claim(
                    &format!("g-{}", row.m),
                    "codes",
                    "admissible-code-bound",
                    &format!("g({0}) = f({0}) by exhaustive search", row.m),
                    ok,
                    serde_json::to_value(row)?,
                );
            }
            r.results = json!({ "rows": rows });
            Ok(r)
        }
        CodesCmd::Weights { m, rows } => {
            let words: Vec<u32> = rows
                .split(',')
                .filter(|w| !w.trim().is_empty())
                .map(|w| parse_bits(w.trim(), *m))
                .collect::<Res<_>>()?;
            let code = BinaryCode::new(*m, &words)?;
            let mut r = Report::new(command, json!({"m": m, "code": code.to_value()}), cfg.seed);
            let wd: Vec<(u32, u64)> = code.weight_distribution().into_iter().collect();
            r.results = json!({
                "dim": code.dim(),
                "weights": wd,
                "doubly_even": code.is_doubly_even(),
                "kummer_admissible": code.is_kummer_admissible(),
            });
            Ok(r)
        }
    }
}

fn parse_bits(w: &str, m: usize) -> Res<u32> {
    if w.len() != m || !w.chars().all(|c| c == '0' || c == '1') {
        return Err(InputError(format!("word {w} is not a bit string of length {m}")));
    }
    Ok(w.chars().enumerate().filter(|(_, c)| *c == '1').fold(0, |a, (i, _)| a | 1 << i))
}

fn kummer(cfg: &RunConfig, c: &KummerCmd, command: Vec<String>, verbose: bool) -> Res<Report> {
    match c {
        KummerCmd::Table => {
            let mut r = Report::new(command, json!({}), cfg.seed);
            for n in ["table1", "roots"] {
                run_claim(claims::find(n).expect("registered"), cfg, &mut r, verbose);
            }
            r.results = json!({"table": r.claims[0].detail["rows"], "roots": r.claims[1].detail["rows"]});
            Ok(r)
        }
        KummerCmd::Embed { kind, sigma, complement, extended } => {
            let kind: KummerType = kind.parse()?;
            let comp: Option<Complement> = complement.as_deref().map(str::parse).transpose()?;
            let mut r = Report::new(
                command,
                json!({"type": kind, "sigma": sigma, "complement": comp, "extended": extended}),
                cfg.seed,
            );
            let res = match comp {
                Some(q) => embed_kummer(kind, *sigma, q, *extended),
                None => embed_any(kind, *sigma),
            };
            let expected = *sigma <= kind.sigma_max();
            let (ok, detail) = match res {
                Ok(e) => (expected && e.all_verified(), serde_json::to_value(&e)?),
                Err(e) => (!expected, json!({"embeds": false, "reason": e.to_string()})),
            };
            r.add_claim(
                "embed",
                "embeddings",
                "embedding-table",
                "an embedding exists with all invariants verified exactly when sigma <= sigma_max(T)",
                ok,
                json!({"sigma_max": kind.sigma_max()}),
            );
            r.results = detail;
            Ok(r)
        }
    }
}

fn parse_field(s: &str) -> Res<Field> {
    let t = s.trim();
    let e = t.strip_prefix("e=").unwrap_or(t);
    let e: u32 = e.parse().map_err(|_| InputError(format!("bad field {s}; expected e=N")))?;
    Ok(Field::new(2, e)?)
}

fn parse_spec(a: &SpecArgs) -> Res<SurfaceSpec> {
    let fam: Family = a.family.parse()?;
    let f = parse_field(&a.field)?;
    let mut coeffs = Vec::new();
    for item in a.coeffs.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item.split_once('=').ok_or_else(|| InputError(format!("malformed coefficient {item}")))?;
        let key = parse_key(k.trim()).ok_or_else(|| InputError(format!("malformed coefficient {item}")))?;
        coeffs.push((key, f.decode(v)?));
    }
    Ok(SurfaceSpec::new(fam, &f, &coeffs)?)
}

fn surface(cfg: &RunConfig, c: &SurfaceCmd, command: Vec<String>) -> Res<Report> {
    match c {
        SurfaceCmd::Classify { spec, expect, points } => {
            let s = parse_spec(spec)?;
            let expect: Option<Branch> = expect.as_deref().map(str::parse).transpose()?;
            let n = normalize(&s)?;
            let mut r = Report::new(
                command,
                json!({"given": s.to_json(), "normalized": n.to_json(), "expect": expect}),
                cfg.seed,
            );
            r.add_degrees([s.field().e(), n.field().e()]);
            match classify_full(&n, *points) {
                Ok(rep) => {
                    for p in rep.points.iter().flatten() {
                        r.add_degrees([p.field.e]);
                    }
                    r.add_claim(
                        "cross-validation",
                        "singularities",
                        "singularity-branches",
                        "coefficient branch agrees with the point profile",
                        true,
                        json!({"branch": rep.branch, "profile": [rep.point_count, rep.colengths[0]]}),
                    );
                    if let Some(b) = expect {
                        r.add_claim(
                            "expected-branch",
                            "singularities",
                            "singularity-branches",
                            "branch equals the --expect value",
                            rep.branch == b,
                            json!({"expected": b, "got": rep.branch}),
                        );
                    }
                    r.results = serde_json::to_value(&rep)?;
                }
                Err(SurfaceError::Inconsistent(msg)) => {
                    r.add_claim(
                        "cross-validation",
                        "singularities",
                        "singularity-branches",
                        "coefficient branch agrees with the point profile",
                        false,
                        json!({ "error": msg }),
                    );
                }
                Err(e) => return Err(e.into()),
            }
            Ok(r)
        }
        SurfaceCmd::DerivationCheck { spec, hamiltonian } => {
            let s = parse_spec(spec)?;
            let d = if *hamiltonian { hamiltonian_derivation(&s) } else { covering_derivation(&s)? };
            let mut r = Report::new(
                command,
                json!({"spec": s.to_json(), "derivation": if *hamiltonian { "hamiltonian" } else { "covering" }}),
                cfg.seed,
            );
            r.add_degrees([s.field().e()]);
            let v = classify_derivations(&d)?;
            let locus = fixed_locus_subgroup_check(&d)?;
            r.add_claim(
                "derivation",
                "subgroup",
                "subgroup-scheme",
                "closure, divisor, coprimality and additive fixed locus",
                v.all_pass(),
                json!({"closure": v.closure, "divisor": v.divisor, "coprime": v.coprime, "subgroup": v.subgroup}),
            );
            r.results = json!({"derivation": d.to_json(), "verdict": v, "fixed_locus": locus.to_json()});
            Ok(r)
        }
        SurfaceCmd::Sample { family, branch, field } => {
            let fam: Family = family.parse()?;
            let b: Branch = branch.parse()?;
            let f = parse_field(field)?;
            let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(cfg.seed);
            let s = sample_spec(fam, b, &f, &mut rng)?;
            let mut r = Report::new(command, json!({"family": fam, "branch": b, "field_degree": f.e()}), cfg.seed);
            r.add_degrees([f.e()]);
            r.results = serde_json::to_value(s.to_json())?;
            Ok(r)
        }
    }
}

fn rdp(cfg: &RunConfig, c: &RdpCmd, command: Vec<String>) -> Res<Report> {
    match c {
        RdpCmd::VerifyLeq5 { max } => {
            let mut r = Report::new(command, json!({ "max_index": max }), cfg.seed);
            let res = verify_leq5(*max)?;
            let ok = res.max_value <= 5;
            r.add_claim("leq5", "leq5", "leq5-bound", "f(m) + b - n_B <= 5", ok, json!({"max_value": res.max_value}));
            r.results = serde_json::to_value(&res)?;
            Ok(r)
        }
        RdpCmd::Table { kind, max_n, p } => {
            let kind = match kind.to_ascii_uppercase().as_str() {
                "A" => Kind::A,
                "D" => Kind::D,
                "E" => Kind::E,
                _ => return Err(InputError(format!("unknown kind {kind}"))),
            };
            let mut r = Report::new(command, json!({"kind": kind, "max_n": max_n, "p": p}), cfg.seed);
            let mut rows = Vec::new();
            let types: Vec<RdpType> = if *p == 2 {
                allowed_types(*max_n).into_iter().filter(|t| t.kind == kind).collect()
            } else {
                (1..=*max_n)
                    .flat_map(|n| (0..=2 * n).map(move |r2| (n, r2)))
                    .filter_map(|(n, r2)| RdpType::new(kind, n, r2, *p).ok())
                    .collect()
            };
            for t in types {
                rows.push(claims::b_bar_row(&t)?);
            }
            r.results = json!({ "rows": rows });
            Ok(r)
        }
        RdpCmd::Bound { collection } => {
            let c: RdpCollection = collection.parse()?;
            let mut r = Report::new(command, json!({ "collection": c.to_string() }), cfg.seed);
            r.results = serde_json::to_value(z_infty_upper_bound(&c)?)?;
            Ok(r)
        }
    }
}
