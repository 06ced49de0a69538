//! Cross-checks the Pauli-frame engine against the tableau: a single Pauli
//! is injected at every qubit and time step, and the residual the frame
//! predicts is compared with the one the tableau measures.
//!
//! `cargo run --release --example frame_vs_tableau`

use mqnc::circuit::{build_protocol, ProtocolId};
use mqnc::tableau::frame_tableau_agreement;

fn main() {
    for id in ProtocolId::ALL {
        let report = frame_tableau_agreement(&build_protocol(id), 4);
        println!(
            "{id:<5} {} locations, {} injections, {} mismatches",
            report.locations,
            report.injections,
            report.mismatches.len()
        );
        for m in report.mismatches.iter().take(3) {
            println!("      {m:?}");
        }
    }
}
