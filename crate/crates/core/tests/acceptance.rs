//! One line per acceptance criterion. Run with
//! `cargo test --test acceptance` (add `-- --quick` to stop the code
//! search at m = 14).

use std::time::Instant;

use kummerlab::report::cli::run;
use kummerlab::report::{run_claim, Report, RunConfig, CLAIMS, DEFAULT_SEED};

fn main() {
    let quick = std::env::args().any(|a| a == "--quick");
    let cfg = RunConfig { seed: DEFAULT_SEED, quick };
    let mut failed = 0;
    for (i, def) in CLAIMS.iter().enumerate().take(12) {
        let t = Instant::now();
        let mut r = Report::new(vec![], serde_json::Value::Null, cfg.seed);
        run_claim(def, &cfg, &mut r, false);
        let ok = r.passed();
        failed += usize::from(!ok);
        println!("criterion {:>2} [{}]: {} ({:.2?})", i + 1, def.name, if ok { "PASS" } else { "FAIL" }, t.elapsed());
        if !ok {
            println!("    {}", r.claims[0].detail);
        }
    }

    // 13: the whole campaign twice with one seed, compared byte for byte
    let t = Instant::now();
    let mut argv = vec!["kummerlab", "verify", "all", "--seed", "7"];
    if quick {
        argv.push("--quick");
    }
    let a = run(argv.clone());
    let b = run(argv);
    let ok = a.code == 0 && a == b && !a.stdout.is_empty();
    failed += usize::from(!ok);
    println!("criterion 13 [determinism]: {} ({:.2?})", if ok { "PASS" } else { "FAIL" }, t.elapsed());
    if !ok {
        println!("    exit codes {} and {}, identical output: {}", a.code, b.code, a.stdout == b.stdout);
    }

    println!("{} of 13 criteria passed", 13 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
