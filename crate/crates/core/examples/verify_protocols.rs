//! Runs every protocol through the stabilizer tableau over all measurement
//! branches and checks the intermediate and final stabilizers.
//!
//! `cargo run --example verify_protocols`

use mqnc::tableau::verify_all;

fn main() {
    let mut ok = true;
    for report in verify_all() {
        let name = report.protocol.map(|p| p.to_string()).unwrap_or_default();
        let mode = if report.exhaustive {
            "exhaustive"
        } else {
            "sampled"
        };
        println!(
            "{name:<5} {} branches ({mode}), {} outcome bits",
            report.branches, report.outcome_bits
        );
        for check in &report.checks {
            println!(
                "      {:<24} {} failing  [{}]",
                check.name,
                check.failed_branches,
                check.generators.join(", ")
            );
        }
        if let Some(f) = &report.first_failure {
            println!("      first failure: {f:?}");
            ok = false;
        }
    }
    std::process::exit(if ok { 0 } else { 1 });
}
