//! Builders for the four butterfly-network protocols.
//!
//! Qubit numbering: the 14-qubit protocols use resource pairs
//! `(0,1) (2,3) (4,5) (6,7) (8,9) (10,11) (12,13)`. Sources hold `{0,2}`
//! and `{4,6}`, targets end with the cross-over outputs `(0,5)` and
//! `(1,4)`. The 12-qubit swapping protocols keep the endpoint labels
//! `0,1,4,5` and route `0 -> 5` through pairs `(0,3) (2,7) (6,5)` and
//! `4 -> 1` through `(4,9) (8,11) (10,1)`.
//!
//! Every builder emits program-ordered operations and lets
//! [`schedule_asap`] assign time steps. The first two steps are always
//! `Prepare` then `Entangle2`.

use crate::pauli::{Basis, Gate1, Gate2, Pauli};

use super::{
    schedule_asap, Circuit, Condition, OperationKind, OutcomeLabel, PairKind, ProtocolId,
    QubitPair, Scheduled,
};

const BUTTERFLY_PAIRS: [(usize, usize); 7] =
    [(0, 1), (2, 3), (4, 5), (6, 7), (8, 9), (10, 11), (12, 13)];
const SWAP_PAIRS: [(usize, usize); 6] = [(0, 3), (2, 7), (6, 5), (4, 9), (8, 11), (10, 1)];

/// Builds the scheduled circuit for `protocol`.
pub fn build_protocol(protocol: ProtocolId) -> Circuit {
    match protocol {
        ProtocolId::Mqnc => mqnc(),
        ProtocolId::Qnc => qnc(),
        ProtocolId::Es => swapping(ProtocolId::Es),
        ProtocolId::Esp => swapping(ProtocolId::Esp),
    }
}

struct Program {
    items: Vec<Scheduled>,
}

impl Program {
    fn new(pairs: &[(usize, usize)], kind: PairKind) -> Self {
        let mut p = Program { items: Vec::new() };
        for &(a, b) in pairs {
            let basis_b = match kind {
                PairKind::BellPhiPlus => Basis::Z,
                PairKind::TwoQubitCluster => Basis::X,
            };
            p.op(OperationKind::Prepare {
                basis: Basis::X,
                q: a,
            });
            p.op(OperationKind::Prepare {
                basis: basis_b,
                q: b,
            });
        }
        for &(a, b) in pairs {
            p.op(OperationKind::Entangle2 { kind, a, b });
        }
        p.barrier();
        p
    }

    fn op(&mut self, op: OperationKind) {
        self.items.push(Scheduled::Op(op));
    }

    fn barrier(&mut self) {
        self.items.push(Scheduled::Barrier);
    }

    fn h(&mut self, q: usize) {
        self.op(OperationKind::Gate1 { gate: Gate1::H, q });
    }

    fn cz(&mut self, a: usize, b: usize) {
        self.op(OperationKind::Gate2 {
            gate: Gate2::Cz,
            a,
            b,
        });
    }

    fn cnot(&mut self, c: usize, t: usize) {
        self.op(OperationKind::Gate2 {
            gate: Gate2::Cnot,
            a: c,
            b: t,
        });
    }

    fn measure(&mut self, basis: Basis, q: usize) {
        self.op(OperationKind::Measure {
            basis,
            q,
            label: label(q),
        });
    }

    fn measure_pair(&mut self, a: usize, b: usize) {
        self.op(OperationKind::MeasurePair {
            a,
            b,
            label_a: label(a),
            label_b: label(b),
        });
    }

    fn byproduct(&mut self, pauli: Pauli, target: usize, on: &[usize]) {
        let condition = Condition::xor_of(on.iter().map(|&q| label(q)));
        self.op(OperationKind::Byproduct {
            pauli,
            target,
            condition,
        });
    }

    fn finish(
        self,
        protocol: ProtocolId,
        qubit_count: usize,
        pairs: &[(usize, usize)],
        kind: PairKind,
        outputs: [(usize, usize); 2],
        output_kind: PairKind,
    ) -> Circuit {
        Circuit {
            qubit_count,
            steps: schedule_asap(&self.items),
            resource_pairs: pairs
                .iter()
                .map(|&(a, b)| QubitPair::new(a, b, kind))
                .collect(),
            outputs: outputs
                .iter()
                .map(|&(a, b)| QubitPair::new(a, b, output_kind))
                .collect(),
            protocol: Some(protocol),
        }
    }
}

fn label(q: usize) -> OutcomeLabel {
    OutcomeLabel(q as u8)
}

/// Cluster-state network coding.
///
/// Step 1 fuses the seven cluster pairs with one layer of local CZs.
/// Step 2 removes the eight relay qubits by X measurement; each removed
/// two-qubit chain leaves a Pauli-only correction one hop away. Step 3
/// measures the bottleneck qubits 9 and 8 in X. All corrections are
/// deferred to the four output qubits.
fn mqnc() -> Circuit {
    let kind = PairKind::TwoQubitCluster;
    let mut p = Program::new(&BUTTERFLY_PAIRS, kind);

    for (a, b) in [
        (0, 2),
        (4, 6),
        (3, 9),
        (7, 9),
        (8, 10),
        (8, 12),
        (5, 11),
        (1, 13),
    ] {
        p.cz(a, b);
    }
    p.barrier();
    for q in [2, 3, 6, 7, 10, 11, 12, 13] {
        p.measure(Basis::X, q);
    }
    p.barrier();
    p.measure(Basis::X, 9);
    p.measure(Basis::X, 8);

    p.byproduct(Pauli::X, 0, &[2, 6]);
    p.byproduct(Pauli::X, 0, &[9]);
    p.byproduct(Pauli::X, 4, &[2, 6]);
    p.byproduct(Pauli::X, 4, &[9]);
    for (pauli, on) in [
        (Pauli::X, 3),
        (Pauli::X, 11),
        (Pauli::X, 13),
        (Pauli::Z, 10),
        (Pauli::X, 8),
    ] {
        p.byproduct(pauli, 5, &[on]);
    }
    for (pauli, on) in [
        (Pauli::X, 7),
        (Pauli::X, 11),
        (Pauli::X, 13),
        (Pauli::Z, 12),
        (Pauli::X, 8),
    ] {
        p.byproduct(pauli, 1, &[on]);
    }
    p.finish(
        ProtocolId::Mqnc,
        14,
        &BUTTERFLY_PAIRS,
        kind,
        [(0, 5), (1, 4)],
        kind,
    )
}

/// Bell-pair network coding with step-by-step feedforward.
///
/// GHZ creation at both sources, bottleneck parity into qubit 8, fan-out
/// from 9 to 10 and 12, target CNOTs into 5 and 1, then X-basis removal of
/// the remaining intermediate qubits. Parity is compiled as CNOT plus a Z
/// readout; X-basis removal as H plus a Z readout.
fn qnc() -> Circuit {
    let kind = PairKind::BellPhiPlus;
    let mut p = Program::new(&BUTTERFLY_PAIRS, kind);

    // GHZ states {0,1,3} and {4,5,7}.
    p.cnot(0, 2);
    p.cnot(4, 6);
    p.measure(Basis::Z, 2);
    p.measure(Basis::Z, 6);
    p.byproduct(Pauli::X, 3, &[2]);
    p.byproduct(Pauli::X, 7, &[6]);

    // Bottleneck parity.
    p.cnot(3, 8);
    p.cnot(7, 8);
    p.measure(Basis::Z, 8);
    p.byproduct(Pauli::X, 9, &[8]);

    // Fan-out.
    p.cnot(9, 10);
    p.cnot(9, 12);
    p.measure(Basis::Z, 10);
    p.measure(Basis::Z, 12);
    p.byproduct(Pauli::X, 11, &[10]);
    p.byproduct(Pauli::X, 13, &[12]);

    // Targets.
    p.cnot(11, 5);
    p.cnot(13, 1);

    // Removal of intermediate qubits.
    p.h(11);
    p.measure(Basis::Z, 11);
    p.h(13);
    p.measure(Basis::Z, 13);
    p.byproduct(Pauli::Z, 9, &[11]);
    p.byproduct(Pauli::Z, 9, &[13]);
    p.h(9);
    p.measure(Basis::Z, 9);
    p.byproduct(Pauli::Z, 3, &[9]);
    p.byproduct(Pauli::Z, 7, &[9]);
    p.h(3);
    p.measure(Basis::Z, 3);
    p.h(7);
    p.measure(Basis::Z, 7);
    p.byproduct(Pauli::Z, 0, &[3]);
    p.byproduct(Pauli::Z, 4, &[7]);

    p.finish(
        ProtocolId::Qnc,
        14,
        &BUTTERFLY_PAIRS,
        kind,
        [(0, 5), (1, 4)],
        kind,
    )
}

/// Two chained entanglement swaps per path. `Es` applies each swap's
/// correction before the next swap; `Esp` swaps everything in one layer and
/// merges corrections onto the endpoints.
fn swapping(protocol: ProtocolId) -> Circuit {
    let kind = PairKind::BellPhiPlus;
    let mut p = Program::new(&SWAP_PAIRS, kind);
    // (first swap qubits, second swap qubits, near endpoint, far endpoint)
    let paths = [((3, 2), (7, 6), 0, 5), ((9, 8), (11, 10), 4, 1)];

    match protocol {
        ProtocolId::Es => {
            for ((a1, b1), (a2, b2), _, far) in paths {
                p.cnot(a1, b1);
                p.h(a1);
                p.measure_pair(a1, b1);
                p.byproduct(Pauli::X, a2, &[b1]);
                p.byproduct(Pauli::Z, a2, &[a1]);
                p.cnot(a2, b2);
                p.h(a2);
                p.measure_pair(a2, b2);
                p.byproduct(Pauli::X, far, &[b2]);
                p.byproduct(Pauli::Z, far, &[a2]);
            }
        }
        _ => {
            for ((a1, b1), (a2, b2), near, far) in paths {
                p.cnot(a1, b1);
                p.cnot(a2, b2);
                p.h(a1);
                p.h(a2);
                p.measure_pair(a1, b1);
                p.measure_pair(a2, b2);
                p.byproduct(Pauli::X, far, &[b1, b2]);
                p.byproduct(Pauli::Z, near, &[a1, a2]);
            }
        }
    }
    p.finish(protocol, 12, &SWAP_PAIRS, kind, [(0, 5), (4, 1)], kind)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{compute_stats, validate, CircuitStats};

    #[allow(clippy::too_many_arguments)]
    fn row(
        q: usize,
        e: usize,
        s: usize,
        bp: usize,
        g2: usize,
        m: usize,
        d: usize,
        kq: usize,
    ) -> CircuitStats {
        CircuitStats {
            qubits: q,
            entangling_ops: e,
            single_qubit_gates: s,
            byproduct_count: bp,
            two_qubit_gates: g2,
            measurements: m,
            depth: d,
            kq,
        }
    }

    #[test]
    fn builders_validate() {
        for id in ProtocolId::ALL {
            let c = build_protocol(id);
            assert_eq!(validate(&c), vec![], "{id}");
        }
    }

    #[test]
    fn stats_match_protocol_table() {
        assert_eq!(
            compute_stats(&build_protocol(ProtocolId::Mqnc)),
            row(14, 7, 14, 14, 8, 10, 10, 140)
        );
        assert_eq!(
            compute_stats(&build_protocol(ProtocolId::Qnc)),
            row(14, 7, 16, 11, 8, 10, 23, 322)
        );
        assert_eq!(
            compute_stats(&build_protocol(ProtocolId::Es)),
            row(12, 6, 12, 8, 4, 4, 12, 144)
        );
        assert_eq!(
            compute_stats(&build_protocol(ProtocolId::Esp)),
            row(12, 6, 8, 4, 4, 4, 6, 72)
        );
    }

    #[test]
    fn initialization_occupies_two_steps() {
        for id in ProtocolId::ALL {
            let c = build_protocol(id);
            assert!(c.steps[0]
                .operations
                .iter()
                .all(|op| matches!(op, OperationKind::Prepare { .. })));
            assert!(c.steps[1]
                .operations
                .iter()
                .all(|op| matches!(op, OperationKind::Entangle2 { .. })));
            assert_eq!(c.steps[1].operations.len(), c.resource_pairs.len());
        }
    }
}
