use std::path::PathBuf;
use std::process::Command;

use kummerlab::report::cli::{run, Exit};
use kummerlab::report::{Report, Status, REPORT_SCHEMA};
use serde_json::Value;

fn kl(args: &[&str]) -> Exit {
    run(std::iter::once("kummerlab").chain(args.iter().copied()))
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.json"))
}

/// Compare against the stored file; UPDATE_GOLDEN=1 rewrites it.
fn check_golden(name: &str, out: &str) {
    let path = golden_path(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, out).unwrap();
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(out, want, "{name} drifted from its golden file");
}

fn validate(out: &str) -> Value {
    let schema: Value = serde_json::from_str(REPORT_SCHEMA).unwrap();
    let v: Value = serde_json::from_str(out).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema).unwrap();
    if let Err(errs) = compiled.validate(&v) {
        let msgs: Vec<String> = errs.map(|e| format!("{} at {}", e, e.instance_path)).collect();
        panic!("schema violations: {msgs:?}");
    }
    v
}

#[test]
fn golden_verify_table1() {
    let e = kl(&["verify", "table1"]);
    assert_eq!(e.code, 0);
    let v = validate(&e.stdout);
    let rows = v["claims"][0]["detail"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    let idx: Vec<&str> = rows.iter().map(|r| r["root_index"].as_str().unwrap()).collect();
    assert_eq!(idx, ["32", "4", "2", "2", "1"]);
    check_golden("verify_table1", &e.stdout);
}

#[test]
fn golden_verify_leq5() {
    let e = kl(&["verify", "leq5"]);
    assert_eq!(e.code, 0);
    let v = validate(&e.stdout);
    assert_eq!(v["claims"][0]["detail"]["equality_cases"].as_array().unwrap().len(), 5);
    check_golden("verify_leq5", &e.stdout);
}

#[test]
fn golden_forced_mismatch() {
    // h11 != 0 puts this spec on the 16A_1 branch; expecting 4D_4 must fail
    let e = kl(&["surface", "classify", "--family", "class4", "--field", "e=3", "--coeffs", "h11=1,h30=01", "--expect", "4D4"]);
    assert_eq!(e.code, 1);
    let v = validate(&e.stdout);
    assert_eq!(v["status"], "fail");
    assert_eq!(v["results"]["branch"], "16A_1");
    check_golden("surface_classify_mismatch", &e.stdout);
}

#[test]
fn reports_of_every_subcommand_validate() {
    let cmds: Vec<Vec<&str>> = vec![
        vec!["lattice", "analyze", "--gram", "[[-2,1],[1,-2]]"],
        vec!["lattice", "analyze", "--root", "E8"],
        vec!["codes", "golay"],
        vec!["codes", "g-table", "--max", "12"],
        vec!["codes", "weights", "--m", "8", "--rows", "11110000,00001111"],
        vec!["kummer", "embed", "--type", "4D4", "--sigma", "4"],
        vec!["surface", "classify", "--family", "class2", "--field", "e=5", "--coeffs", "h12=11,h05=111", "--points"],
        vec!["surface", "derivation-check", "--family", "class4", "--field", "e=4", "--coeffs", "h11=1,h21=01"],
        vec!["surface", "sample", "--family", "class2", "--branch", "2E_8^0", "--field", "e=6"],
        vec!["rdp", "verify-leq5", "--max", "10"],
        vec!["rdp", "table", "--type", "D", "--max-n", "12"],
        vec!["rdp", "table", "--type", "E", "--max-n", "8", "--p", "3"],
        vec!["rdp", "bound", "--collection", "13A_1 + D_4^0"],
    ];
    for c in cmds {
        let e = kl(&c);
        assert_eq!(e.code, 0, "{c:?}: {}", e.stderr);
        let v = validate(&e.stdout);
        let r: Report = serde_json::from_value(v).unwrap();
        assert_eq!(r.status, Status::Pass);
        assert_eq!(r.command, c);
    }
}

#[test]
fn sample_lands_on_its_branch() {
    let e = kl(&["surface", "sample", "--family", "class4", "--branch", "D16", "--field", "e=5", "--seed", "3"]);
    let v: Value = serde_json::from_str(&e.stdout).unwrap();
    let coeffs: Vec<String> = v["results"]["coeffs"]
        .as_object()
        .unwrap()
        .iter()
        .map(|(k, c)| format!("{k}={}", c.as_str().unwrap()))
        .collect();
    let coeffs = coeffs.join(",");
    let e = kl(&["surface", "classify", "--family", "class4", "--field", "e=5", "--coeffs", &coeffs, "--expect", "1D_16^0"]);
    assert_eq!(e.code, 0, "{}", e.stdout);
}

#[test]
fn h07_derivation_check_fails() {
    let e = kl(&["surface", "derivation-check", "--family", "class2", "--field", "e=4", "--coeffs", "h12=1,h07=1", "--hamiltonian"]);
    assert_eq!(e.code, 1);
    let v = validate(&e.stdout);
    assert_eq!(v["claims"][0]["detail"]["subgroup"], false);
    assert_eq!(v["results"]["fixed_locus"]["additive"], false);
}

#[test]
fn input_errors() {
    for c in [
        vec!["surface", "classify", "--family", "class5", "--field", "e=3"],
        vec!["surface", "classify", "--family", "class4", "--field", "e=3", "--coeffs", "h30"],
        vec!["surface", "classify", "--family", "class4", "--field", "e=3", "--coeffs", "h30=0102"],
        vec!["surface", "classify", "--family", "class4", "--field", "e=0"],
        vec!["surface", "classify", "--family", "class4", "--field", "e=3", "--expect", "3A2"],
        vec!["codes", "weights", "--m", "4", "--rows", "111"],
        vec!["lattice", "analyze", "--gram", "[[1,2],[3,4]]"],
        vec!["rdp", "bound", "--collection", "X7"],
        vec!["kummer", "embed", "--type", "5A5", "--sigma", "1"],
        vec!["verify"],
    ] {
        let e = kl(&c);
        assert_eq!(e.code, 2, "{c:?}");
        assert!(e.stdout.is_empty(), "{c:?}");
        assert!(!e.stderr.is_empty());
    }
}

#[test]
fn seeds_change_witnesses_not_verdicts() {
    let a = kl(&["verify", "all", "--quick", "--seed", "7"]);
    let b = kl(&["verify", "all", "--quick", "--seed", "7", "--jobs", "2"]);
    let c = kl(&["verify", "all", "--quick", "--seed", "8"]);
    assert_eq!(a.code, 0);
    let strip = |s: &str| {
        let mut r: Report = serde_json::from_str(s).unwrap();
        r.command.clear();
        r.to_json()
    };
    assert_eq!(strip(&a.stdout), strip(&b.stdout), "thread count changed the report");
    assert_ne!(a.stdout, c.stdout);
    let verdicts = |s: &str| {
        let r: Report = serde_json::from_str(s).unwrap();
        r.claims.iter().map(|c| (c.id.clone(), c.passed)).collect::<Vec<_>>()
    };
    assert_eq!(verdicts(&a.stdout), verdicts(&c.stdout));
    let r: Report = serde_json::from_str(&a.stdout).unwrap();
    assert_eq!(r.claims.len(), 13);
    assert_eq!(r.claims[2].detail["max_m"], 14);
}

#[test]
fn binary_exit_codes_env_seed_and_out_file() {
    let bin = env!("CARGO_BIN_EXE_kummerlab");
    let out = Command::new(bin).args(["verify", "golay"]).env("KUMMERLAB_SEED", "99").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["seed"], 99);
    let out = Command::new(bin).args(["no-such-command"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let out = Command::new(bin)
        .args(["surface", "classify", "--family", "class4", "--field", "e=3", "--coeffs", "h11=1", "--expect", "2E8"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let dir = std::env::temp_dir().join(format!("kummerlab-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("r.json");
    let out = Command::new(bin).args(["verify", "table2", "--out"]).arg(&file).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    validate(&std::fs::read_to_string(&file).unwrap());
    std::fs::remove_dir_all(&dir).unwrap();
}
