//! Branch-exhaustive verification of protocol circuits.
//!
//! Every measurement-outcome branch is replayed on a fresh tableau with the
//! outcomes forced, byproducts applied from the recorded bits, and the
//! declared output generators checked with `+1` sign. Protocol-specific
//! waypoints check intermediate states, with signs that may depend on the
//! branch.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{build_protocol, Circuit, Condition, OperationKind, OutcomeLabel, ProtocolId};
use crate::pauli::Pauli;

use super::{OutcomeChoice, PauliString, StabilizerTableau};

/// Branches are enumerated exhaustively up to this many outcome bits.
pub const EXHAUSTIVE_LIMIT: usize = 12;
/// Branches sampled beyond the exhaustive limit.
pub const SAMPLED_BRANCHES: usize = 256;

/// A generator expected to stabilize the state with sign
/// `(-1)^(parity of sign_labels)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expectation {
    pub generator: PauliString,
    pub sign_labels: Condition,
}

impl Expectation {
    pub fn plus(generator: PauliString) -> Self {
        Expectation {
            generator,
            sign_labels: Condition::xor_of([]),
        }
    }

    fn expected(&self, record: u64) -> PauliString {
        self.generator.with_sign(self.sign_labels.evaluate(record))
    }
}

impl fmt::Display for Expectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = self.generator.with_sign(false).to_string();
        let body = body.trim_start_matches('+');
        if self.sign_labels.labels().is_empty() {
            write!(f, "+{body}")
        } else {
            write!(f, "(-1)^({}) {body}", self.sign_labels)
        }
    }
}

/// A named set of expectations checked at one point of the circuit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Waypoint {
    pub name: String,
    /// Checked after this step; `None` means after the whole circuit.
    pub after_step: Option<usize>,
    /// Byproducts reading any of these labels are skipped.
    pub skip_byproducts_on: Vec<OutcomeLabel>,
    pub expectations: Vec<Expectation>,
}

/// First failing branch of a check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchFailure {
    pub check: String,
    pub branch: usize,
    pub assignment: Vec<(OutcomeLabel, bool)>,
    pub failed_generator: String,
}

/// Outcome of one named check across all branches.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub name: String,
    pub generators: Vec<String>,
    pub failed_branches: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub protocol: Option<ProtocolId>,
    pub outcome_bits: usize,
    pub branches: usize,
    pub exhaustive: bool,
    pub checks: Vec<CheckSummary>,
    pub first_failure: Option<BranchFailure>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }

    /// Branches failing at least one check of `name`.
    pub fn failed_branches(&self, name: &str) -> Option<usize> {
        self.checks
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.failed_branches)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.protocol.map(ProtocolId::name).unwrap_or("circuit");
        writeln!(
            f,
            "{name}: {} over {} branches ({}, {} outcome bits)",
            if self.passed() { "PASS" } else { "FAIL" },
            self.branches,
            if self.exhaustive {
                "exhaustive"
            } else {
                "sampled"
            },
            self.outcome_bits
        )?;
        for c in &self.checks {
            let status = if c.failed_branches == 0 {
                "ok  "
            } else {
                "FAIL"
            };
            writeln!(f, "  [{status}] {}", c.name)?;
            for g in &c.generators {
                writeln!(f, "         {g}")?;
            }
            if c.failed_branches > 0 {
                writeln!(f, "         failing branches: {}", c.failed_branches)?;
            }
        }
        if let Some(fail) = &self.first_failure {
            let mut assignment = String::new();
            for (l, b) in &fail.assignment {
                write!(assignment, " {l}={}", *b as u8).unwrap();
            }
            writeln!(
                f,
                "  first failure: {} branch {}: {}",
                fail.check, fail.branch, fail.failed_generator
            )?;
            writeln!(f, "  assignment:{assignment}")?;
        }
        Ok(())
    }
}

fn pair_expectations(
    n: usize,
    pairs: &[(usize, usize, crate::circuit::PairKind)],
) -> Vec<Expectation> {
    pairs
        .iter()
        .flat_map(|&(a, b, kind)| PauliString::pair_generators(n, a.min(b), a.max(b), kind))
        .map(Expectation::plus)
        .collect()
}

fn step_of(circuit: &Circuit, pred: impl Fn(&OperationKind) -> bool) -> Option<usize> {
    circuit
        .operations()
        .filter(|(_, op)| pred(op))
        .map(|(s, _)| s)
        .last()
}

/// Intermediate checks for the built-in protocols.
pub fn protocol_waypoints(circuit: &Circuit) -> Vec<Waypoint> {
    let n = circuit.qubit_count;
    let t = |q: u8| OutcomeLabel(q);
    let term = |s: &str| PauliString::parse_sparse(n, s).expect("static generator");
    match circuit.protocol {
        Some(ProtocolId::Mqnc) => {
            let mut edges: Vec<(usize, usize)> =
                circuit.resource_pairs.iter().map(|p| (p.a, p.b)).collect();
            for (_, op) in circuit.operations() {
                if let OperationKind::Gate2 { a, b, .. } = op {
                    edges.push((*a, *b));
                }
            }
            let graph: Vec<Expectation> = (0..n)
                .map(|v| {
                    let mut g = PauliString::identity(n);
                    g.set(v, Pauli::X);
                    for &(a, b) in &edges {
                        if a == v {
                            g.set(b, Pauli::Z);
                        } else if b == v {
                            g.set(a, Pauli::Z);
                        }
                    }
                    Expectation::plus(g)
                })
                .collect();
            let cz_layer = step_of(circuit, |op| matches!(op, OperationKind::Gate2 { .. }));
            let sign = |labels: &[u8]| Condition::xor_of(labels.iter().map(|&q| t(q)));
            vec![
                Waypoint {
                    name: "graph state after the local CZ layer".into(),
                    after_step: cz_layer,
                    skip_byproducts_on: vec![],
                    expectations: graph,
                },
                Waypoint {
                    name: "cross-over stabilizers after bottleneck readout, before its corrections"
                        .into(),
                    after_step: None,
                    skip_byproducts_on: vec![t(8), t(9)],
                    expectations: vec![
                        Expectation {
                            generator: term("X0 Z5"),
                            sign_labels: sign(&[8]),
                        },
                        Expectation {
                            generator: term("X1 Z4"),
                            sign_labels: sign(&[9]),
                        },
                        Expectation {
                            generator: term("Z1 X4"),
                            sign_labels: sign(&[8]),
                        },
                        Expectation {
                            generator: term("Z0 X5"),
                            sign_labels: sign(&[9]),
                        },
                    ],
                },
            ]
        }
        Some(ProtocolId::Qnc) => {
            let ghz_done = step_of(circuit, |op| {
                matches!(op, OperationKind::Byproduct { target, .. } if *target == 3 || *target == 7)
                    && matches!(
                        op,
                        OperationKind::Byproduct {
                            pauli: Pauli::X,
                            ..
                        }
                    )
            });
            let mut ghz: Vec<Expectation> =
                ["X0 X1 X3", "Z0 Z1", "Z1 Z3", "X4 X5 X7", "Z4 Z5", "Z5 Z7"]
                    .iter()
                    .map(|s| Expectation::plus(term(s)))
                    .collect();
            ghz.extend(pair_expectations(
                n,
                &[
                    (8, 9, crate::circuit::PairKind::BellPhiPlus),
                    (10, 11, crate::circuit::PairKind::BellPhiPlus),
                    (12, 13, crate::circuit::PairKind::BellPhiPlus),
                ],
            ));
            vec![
                Waypoint {
                    name: "two 3-qubit GHZ states at the sources".into(),
                    after_step: ghz_done,
                    skip_byproducts_on: vec![],
                    expectations: ghz,
                },
                Waypoint {
                    name: "final product of Bell pairs (0,5) and (1,4)".into(),
                    after_step: None,
                    skip_byproducts_on: vec![],
                    expectations: ["X0 X5", "Z0 Z5", "X1 X4", "Z1 Z4"]
                        .iter()
                        .map(|s| Expectation::plus(term(s)))
                        .collect(),
                },
            ]
        }
        _ => Vec::new(),
    }
}

fn produced_labels(circuit: &Circuit) -> Vec<OutcomeLabel> {
    let mut seen = BTreeSet::new();
    circuit
        .operations()
        .flat_map(|(_, op)| op.produced_labels())
        .filter(|l| seen.insert(*l))
        .collect()
}

/// Replays `circuit` on one branch and evaluates `waypoint`; returns the
/// first generator that fails.
fn check_branch(
    circuit: &Circuit,
    labels: &[OutcomeLabel],
    branch: u64,
    waypoint: &Waypoint,
) -> Option<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(branch);
    let mut t = StabilizerTableau::new(circuit.qubit_count);
    let mut record = 0u64;
    let mut choose = |l: OutcomeLabel| {
        let pos = labels
            .iter()
            .position(|&x| x == l)
            .expect("label produced by circuit");
        OutcomeChoice::Prefer((branch >> pos) & 1 == 1)
    };
    let skip_mask = waypoint
        .skip_byproducts_on
        .iter()
        .fold(0u64, |m, l| m | l.bit());
    let last = waypoint
        .after_step
        .unwrap_or(circuit.depth().saturating_sub(1));
    for (s, step) in circuit.steps.iter().enumerate().take(last + 1) {
        for op in &step.operations {
            if let OperationKind::Byproduct { condition, .. } = op {
                if condition.mask() & skip_mask != 0 {
                    continue;
                }
            }
            t.apply(op, &mut choose, &mut record, &mut rng);
        }
        debug_assert!(s > 1 || t.is_consistent());
    }
    waypoint
        .expectations
        .iter()
        .map(|e| e.expected(record))
        .find(|g| !t.stabilizes(g))
        .map(|g| format!("{g} not stabilized"))
}

/// Verifies `circuit` over all (or a sample of) measurement branches.
pub fn verify_protocol(circuit: &Circuit) -> VerificationReport {
    let labels = produced_labels(circuit);
    let bits = labels.len();
    let exhaustive = bits <= EXHAUSTIVE_LIMIT;
    let branches: Vec<u64> = if exhaustive {
        (0..1u64 << bits).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5EED);
        (0..SAMPLED_BRANCHES)
            .map(|_| rng.random::<u64>() & (u64::MAX >> (64 - bits.min(64))))
            .collect()
    };

    let outputs: Vec<_> = circuit.outputs.iter().map(|o| (o.a, o.b, o.kind)).collect();
    let mut waypoints = protocol_waypoints(circuit);
    waypoints.push(Waypoint {
        name: "declared outputs".into(),
        after_step: None,
        skip_byproducts_on: vec![],
        expectations: pair_expectations(circuit.qubit_count, &outputs),
    });

    let mut checks = Vec::new();
    let mut first_failure = None;
    for w in &waypoints {
        let mut failed = 0;
        for (i, &b) in branches.iter().enumerate() {
            if let Some(msg) = check_branch(circuit, &labels, b, w) {
                failed += 1;
                if first_failure.is_none() {
                    first_failure = Some(BranchFailure {
                        check: w.name.clone(),
                        branch: i,
                        assignment: labels
                            .iter()
                            .enumerate()
                            .map(|(k, &l)| (l, (b >> k) & 1 == 1))
                            .collect(),
                        failed_generator: msg,
                    });
                }
            }
        }
        checks.push(CheckSummary {
            name: w.name.clone(),
            generators: w.expectations.iter().map(|e| e.to_string()).collect(),
            failed_branches: failed,
        });
    }

    VerificationReport {
        protocol: circuit.protocol,
        outcome_bits: bits,
        branches: branches.len(),
        exhaustive,
        checks,
        first_failure,
    }
}

/// Verifies the four built-in protocols.
pub fn verify_all() -> Vec<VerificationReport> {
    ProtocolId::ALL
        .iter()
        .map(|&p| verify_protocol(&build_protocol(p)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_protocols_verify() {
        for report in verify_all() {
            assert!(report.passed(), "{report}");
            assert!(report.exhaustive);
        }
    }

    #[test]
    fn esp_branch_count() {
        let r = verify_protocol(&build_protocol(ProtocolId::Esp));
        assert_eq!(r.branches, 256);
        assert_eq!(r.outcome_bits, 8);
    }
}
