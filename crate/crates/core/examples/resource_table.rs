//! Builds the four protocol circuits and prints their resource counts.
//!
//! `cargo run --example resource_table`

use mqnc::circuit::{build_protocol, compute_stats, depth_reduction, ProtocolId};

fn main() {
    println!(
        "{:<5} {:>6} {:>6} {:>9} {:>5} {:>5} {:>5} {:>5}",
        "", "qubits", "pairs", "1q (bp)", "2q", "meas", "depth", "kq"
    );
    for id in ProtocolId::ALL {
        let s = compute_stats(&build_protocol(id));
        println!(
            "{:<5} {:>6} {:>6} {:>9} {:>5} {:>5} {:>5} {:>5}",
            id,
            s.qubits,
            s.entangling_ops,
            format!("{} ({})", s.single_qubit_gates, s.byproduct_count),
            s.two_qubit_gates,
            s.measurements,
            s.depth,
            s.kq
        );
    }
    let mqnc = compute_stats(&build_protocol(ProtocolId::Mqnc));
    let qnc = compute_stats(&build_protocol(ProtocolId::Qnc));
    println!(
        "\nMQNC is {:.1}% shallower than QNC",
        100.0 * depth_reduction(&mqnc, &qnc)
    );
}
