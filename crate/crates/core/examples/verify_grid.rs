//! Runs the verification grid and lists each case's predicates.
//!
//!     cargo run --release --example verify_grid -- [--quick]

use radial_ld::verify::run_verification;

fn main() {
    let quick = std::env::args().any(|a| a == "--quick");
    let report = run_verification(quick);
    for c in &report.cases {
        let p = c.parameters;
        let failed: Vec<_> = c.predicates.iter().filter(|(_, ok)| !**ok).map(|(k, _)| *k).collect();
        println!(
            "{:<8} Q2={:<20} r0={:<20} v0={:<22} {} {}",
            c.group,
            p.q2,
            p.r0,
            p.v0,
            if c.passed { "ok" } else { "FAIL" },
            failed.join(",")
        );
    }
    println!("{} cases, {} failures", report.summary.cases, report.summary.failures);
}
