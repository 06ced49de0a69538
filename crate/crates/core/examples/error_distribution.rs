//! Tallies which Pauli classes reach output pair 0 for MQNC under the total
//! error model, raw and after folding by the pair's stabilizers.
//!
//! `cargo run --release --example error_distribution`

use mqnc::analysis::{output_class_probability, HistogramKind};
use mqnc::circuit::{build_protocol, ProtocolId};
use mqnc::cli::preset;
use mqnc::engine::{run_datapoint, TerminationRule};
use mqnc::pauli::PauliPair;

fn main() -> mqnc::Result<()> {
    let spec = preset("fig11")?.spec;
    let rule = TerminationRule {
        max_errors: 10_000,
        max_trials: 300_000,
    };
    let circuit = build_protocol(ProtocolId::Mqnc);
    for f_op in [0.98, 0.99, 1.0] {
        let point = run_datapoint(&circuit, &spec.model_at(f_op), &rule, 2);
        println!(
            "F_operation = {f_op}, {} trials, joint F = {:.4}",
            point.trials, point.fidelity
        );
        for class in PauliPair::all().skip(1) {
            let raw = output_class_probability(&point, 0, HistogramKind::Raw, class);
            let folded = output_class_probability(&point, 0, HistogramKind::Folded, class);
            if raw > 0.0 || folded > 0.0 {
                println!(
                    "  {class}  raw {:>7.4}%  folded {:>7.4}%",
                    100.0 * raw,
                    100.0 * folded
                );
            }
        }
    }
    Ok(())
}
