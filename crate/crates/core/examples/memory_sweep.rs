//! Memory fidelity swept alone at 99% gate fidelity and 98% input fidelity,
//! then the same gates with perfect memory.
//!
//! `cargo run --release --example memory_sweep`

use mqnc::circuit::{build_protocol, ProtocolId};
use mqnc::cli::preset;
use mqnc::engine::{run_datapoint, run_sweep, SweepSpec, TerminationRule};

fn main() -> mqnc::Result<()> {
    let rule = TerminationRule {
        max_errors: 2_000,
        max_trials: 50_000,
    };
    let spec = SweepSpec {
        step: 0.005,
        rule,
        seed: 14,
        ..preset("fig14")?.spec
    };
    let result = run_sweep(&spec)?;
    print!("F_memory");
    for s in &result.series {
        print!("{:>9}", s.protocol);
    }
    println!();
    for (i, x) in spec.coordinates().iter().enumerate() {
        print!("{x:<8}");
        for s in &result.series {
            print!("{:>9.4}", s.points[i].fidelity);
        }
        println!();
    }

    let ideal = preset("fig13")?.spec.model_at(0.99);
    print!("ideal   ");
    for id in ProtocolId::ALL {
        print!(
            "{:>9.4}",
            run_datapoint(&build_protocol(id), &ideal, &rule, 14).fidelity
        );
    }
    println!();
    Ok(())
}
