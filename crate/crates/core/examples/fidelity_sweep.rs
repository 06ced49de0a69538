//! Sweeps gate, readout and memory fidelity together at 98% input fidelity
//! and reports where each protocol's fidelity crosses 50%.
//!
//! `cargo run --release --example fidelity_sweep`

use mqnc::analysis::{crossing, fidelity_curve};
use mqnc::cli::preset;
use mqnc::engine::{run_sweep, SweepSpec, TerminationRule};

fn main() -> mqnc::Result<()> {
    let spec = SweepSpec {
        step: 0.002,
        rule: TerminationRule {
            max_errors: 2_000,
            max_trials: 50_000,
        },
        seed: 11,
        ..preset("fig10")?.spec
    };
    let result = run_sweep(&spec)?;
    for s in &result.series {
        let curve = fidelity_curve(&s.points);
        let cross = crossing(&curve, 0.5)
            .map(|x| format!("{:.3}%", 100.0 * x))
            .unwrap_or_else(|| "not reached".into());
        let last = s.points.last().expect("non-empty sweep");
        println!(
            "{:<5} 50% crossing at {cross:<11} F(1.0) = {:.4} [{:.4}, {:.4}]",
            s.protocol, last.fidelity, last.ci_low, last.ci_high
        );
    }
    Ok(())
}
