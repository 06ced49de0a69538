//! Places hand-picked Paulis in a noiseless run and shows where they end
//! up on the two output pairs, raw and modulo the output stabilizers.
//!
//! `cargo run --example fault_injection -- MQNC 3 2 X`
//! (protocol, after-step, qubit, Pauli; defaults shown)

use mqnc::circuit::{build_protocol, ProtocolId};
use mqnc::engine::{propagate_faults, CompiledCircuit};
use mqnc::pauli::Pauli;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |i: usize, d: &str| args.get(i).cloned().unwrap_or_else(|| d.to_string());
    let id: ProtocolId = arg(0, "MQNC").parse().expect("protocol");
    let step: usize = arg(1, "3").parse().expect("step");
    let qubit: usize = arg(2, "2").parse().expect("qubit");
    let pauli = arg(3, "X")
        .chars()
        .next()
        .and_then(Pauli::from_symbol)
        .expect("Pauli");

    let circuit = CompiledCircuit::new(&build_protocol(id));
    println!(
        "{id}: {pauli} on qubit {qubit} after step {step} of {}",
        circuit.depth()
    );
    let out = propagate_faults(&circuit, &[(step, qubit, pauli)]);
    for (i, (raw, folded)) in out.raw_residual.iter().zip(out.folded_residual).enumerate() {
        println!("  output {i}: raw {raw}, folded {folded}");
    }
    println!(
        "  {}",
        if out.any_error {
            "logical error"
        } else {
            "absorbed"
        }
    );

    // Every single-qubit fault at this step, for comparison.
    println!("\nall faults after step {step}:");
    for q in 0..circuit.qubit_count() {
        let row: Vec<String> = Pauli::NON_IDENTITY
            .iter()
            .map(|&p| {
                let o = propagate_faults(&circuit, &[(step, q, p)]);
                format!("{p}->{}{}", o.folded_residual[0], o.folded_residual[1])
            })
            .collect();
        println!("  q{q:<2} {}", row.join("  "));
    }
}
