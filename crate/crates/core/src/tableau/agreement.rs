//! Cross-check of the Pauli-frame engine against the tableau.
//!
//! A single Pauli is injected after a time step on a live qubit. The frame
//! engine predicts the folded residual on each output; the tableau replays
//! the same circuit with that Pauli applied as a gate and reads the signs of
//! the output generators, which identify the residual coset uniquely.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::fold;
use crate::circuit::{Circuit, OperationKind, OutcomeLabel, PairKind, ProtocolId};
use crate::engine::{propagate_faults, CompiledCircuit};
use crate::pauli::{Pauli, PauliPair};

use super::{OutcomeChoice, PauliString, StabilizerTableau};

/// A fault site: Pauli on `qubit` right after step `after_step`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaultLocation {
    pub after_step: usize,
    pub qubit: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgreementMismatch {
    pub location: FaultLocation,
    pub pauli: Pauli,
    pub branch_seed: u64,
    pub frame: [PauliPair; 2],
    /// `None` where the tableau state is not an eigenstate of a generator.
    pub tableau: [Option<PauliPair>; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AgreementReport {
    pub protocol: Option<ProtocolId>,
    pub locations: usize,
    pub injections: usize,
    pub mismatches: Vec<AgreementMismatch>,
}

impl AgreementReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Live qubits after each step: prepared and not yet measured.
fn live_after(circuit: &Circuit) -> Vec<u64> {
    let mut live = 0u64;
    circuit
        .steps
        .iter()
        .map(|step| {
            for op in &step.operations {
                match op {
                    OperationKind::Prepare { q, .. } => live |= 1 << q,
                    OperationKind::Measure { q, .. } => live &= !(1u64 << q),
                    OperationKind::MeasurePair { a, b, .. } => live &= !((1u64 << a) | (1u64 << b)),
                    _ => {}
                }
            }
            live
        })
        .collect()
}

/// Folded residual class implied by the generator signs of an output.
fn class_from_signs(kind: PairKind, negative: [bool; 2]) -> PauliPair {
    let [g1, g2] = kind.generators().map(|(a, b)| PauliPair::new(a, b));
    PauliPair::all()
        .filter(|c| fold(*c, kind) == *c)
        .find(|c| c.anticommutes_with(g1) == negative[0] && c.anticommutes_with(g2) == negative[1])
        .expect("four cosets cover every sign pattern")
}

fn tableau_residual(
    circuit: &Circuit,
    fault: (usize, usize, Pauli),
    seed: u64,
) -> [Option<PauliPair>; 2] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = StabilizerTableau::new(circuit.qubit_count);
    let mut record = 0u64;
    let mut choose = |_: OutcomeLabel| OutcomeChoice::Random;
    for (s, step) in circuit.steps.iter().enumerate() {
        for op in &step.operations {
            t.apply(op, &mut choose, &mut record, &mut rng);
        }
        if s == fault.0 {
            t.pauli(fault.1, fault.2);
        }
    }
    let mut out = [None; 2];
    for (k, o) in circuit.outputs.iter().enumerate().take(2) {
        let (lo, hi) = o.ordered();
        let [g1, g2] = PauliString::pair_generators(circuit.qubit_count, lo, hi, o.kind);
        if let (Some(s1), Some(s2)) = (t.sign_of(&g1), t.sign_of(&g2)) {
            out[k] = Some(class_from_signs(o.kind, [s1, s2]));
        }
    }
    out
}

/// Injects X, Y and Z at every live location and compares the frame and
/// tableau residuals on `branches` random outcome branches per injection.
pub fn frame_tableau_agreement(circuit: &Circuit, branches: u64) -> AgreementReport {
    let compiled = CompiledCircuit::new(circuit);
    let live = live_after(circuit);
    let mut report = AgreementReport {
        protocol: circuit.protocol,
        locations: 0,
        injections: 0,
        mismatches: vec![],
    };
    // Faults before the resources exist are not meaningful.
    let first = circuit
        .steps
        .iter()
        .position(|s| {
            s.operations
                .iter()
                .any(|op| matches!(op, OperationKind::Entangle2 { .. }))
        })
        .unwrap_or(0);
    for (s, &mask) in live.iter().enumerate().skip(first) {
        for q in (0..circuit.qubit_count).filter(|q| mask & (1 << q) != 0) {
            report.locations += 1;
            for p in Pauli::NON_IDENTITY {
                let frame = propagate_faults(&compiled, &[(s, q, p)]).folded_residual;
                for b in 0..branches {
                    report.injections += 1;
                    let seed = ((s as u64) << 32) ^ ((q as u64) << 16) ^ ((p as u64) << 8) ^ b;
                    let tab = tableau_residual(circuit, (s, q, p), seed);
                    if tab != [Some(frame[0]), Some(frame[1])] {
                        report.mismatches.push(AgreementMismatch {
                            location: FaultLocation {
                                after_step: s,
                                qubit: q,
                            },
                            pauli: p,
                            branch_seed: seed,
                            frame,
                            tableau: tab,
                        });
                    }
                }
            }
        }
    }
    report
}
