//! Input-only noise with the three error shapes: Z on odd qubits, X on odd
//! qubits, and uniform over errors that change the resource state.
//! Local operations are ideal.
//!
//! `cargo run --release --example input_bias`

use mqnc::circuit::{build_protocol, ProtocolId};
use mqnc::engine::{run_datapoint, TerminationRule};
use mqnc::noise::{InitBias, NoiseModel};

fn main() {
    let rule = TerminationRule {
        max_errors: 5_000,
        max_trials: 100_000,
    };
    for bias in [
        InitBias::ZOnOdd,
        InitBias::XOnOdd,
        InitBias::UniformObservable,
    ] {
        println!("{bias:?}");
        println!(
            "  F_input  {}",
            ProtocolId::ALL.map(|p| format!("{p:>8}")).join("")
        );
        for f_in in [0.5, 0.8, 0.9, 0.95] {
            let model = NoiseModel::input_only(f_in, bias);
            let row: Vec<String> = ProtocolId::ALL
                .iter()
                .map(|&p| {
                    format!(
                        "{:>8.4}",
                        run_datapoint(&build_protocol(p), &model, &rule, 1).fidelity
                    )
                })
                .collect();
            println!("  {f_in:<7}  {}", row.join(""));
        }
    }
}
