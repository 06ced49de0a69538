//! Time-stepped circuit IR, ASAP scheduling, validation and statistics.
//!
//! A [`Circuit`] is a sequence of [`TimeStep`]s. Each step holds operations
//! on pairwise-disjoint qubits. Measurements retire their qubits and emit
//! outcome labels; byproducts consume those labels no earlier than the step
//! after the measurement that produced them.

mod builders;
mod text;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::pauli::{Basis, Gate1, Gate2, Pauli};

pub use builders::build_protocol;

/// The four protocols on the butterfly network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ProtocolId {
    #[serde(rename = "MQNC")]
    Mqnc,
    #[serde(rename = "QNC")]
    Qnc,
    #[serde(rename = "ES")]
    Es,
    #[serde(rename = "ESP")]
    Esp,
}

impl ProtocolId {
    pub const ALL: [ProtocolId; 4] = [
        ProtocolId::Mqnc,
        ProtocolId::Qnc,
        ProtocolId::Es,
        ProtocolId::Esp,
    ];

    pub const fn name(self) -> &'static str {
        match self {
            ProtocolId::Mqnc => "MQNC",
            ProtocolId::Qnc => "QNC",
            ProtocolId::Es => "ES",
            ProtocolId::Esp => "ESP",
        }
    }

    /// Small stable code used when deriving per-datapoint RNG streams.
    pub const fn code(self) -> u64 {
        match self {
            ProtocolId::Mqnc => 0,
            ProtocolId::Qnc => 1,
            ProtocolId::Es => 2,
            ProtocolId::Esp => 3,
        }
    }
}

impl fmt::Display for ProtocolId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for ProtocolId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "MQNC" => Ok(ProtocolId::Mqnc),
            "QNC" => Ok(ProtocolId::Qnc),
            "ES" => Ok(ProtocolId::Es),
            "ESP" | "ES_P" | "ES-P" => Ok(ProtocolId::Esp),
            _ => Err(Error::UnknownProtocol(s.to_string())),
        }
    }
}

/// Two-qubit entangled state kinds, used both for resources and outputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PairKind {
    /// `|Phi+>`, stabilized by `XX` and `ZZ`.
    BellPhiPlus,
    /// `CZ |++>`, stabilized by `XZ` and `ZX`.
    TwoQubitCluster,
}

impl PairKind {
    pub const fn keyword(self) -> &'static str {
        match self {
            PairKind::BellPhiPlus => "bell",
            PairKind::TwoQubitCluster => "cluster",
        }
    }

    /// Ideal stabilizer generators with `+1` sign, in slot order.
    pub const fn generators(self) -> [(Pauli, Pauli); 2] {
        match self {
            PairKind::BellPhiPlus => [(Pauli::X, Pauli::X), (Pauli::Z, Pauli::Z)],
            PairKind::TwoQubitCluster => [(Pauli::X, Pauli::Z), (Pauli::Z, Pauli::X)],
        }
    }
}

impl FromStr for PairKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bell" => Ok(PairKind::BellPhiPlus),
            "cluster" => Ok(PairKind::TwoQubitCluster),
            _ => Err(Error::parse(format!("unknown pair kind {s:?}"))),
        }
    }
}

/// A declared two-qubit pair. Resource pairs are prepared with `a` in
/// `|+>`; outputs are read in ascending qubit order regardless of `a, b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QubitPair {
    pub a: usize,
    pub b: usize,
    pub kind: PairKind,
}

impl QubitPair {
    pub const fn new(a: usize, b: usize, kind: PairKind) -> Self {
        QubitPair { a, b, kind }
    }

    /// `(low, high)` qubit indices.
    pub fn ordered(&self) -> (usize, usize) {
        (self.a.min(self.b), self.a.max(self.b))
    }
}

/// Name of a classical measurement outcome. Rendered as `t<n>`; by
/// convention `n` is the measured qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OutcomeLabel(pub u8);

impl OutcomeLabel {
    pub const MAX: usize = 64;

    pub const fn bit(self) -> u64 {
        1 << self.0
    }
}

impl fmt::Display for OutcomeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}", self.0)
    }
}

impl FromStr for OutcomeLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let digits = s
            .trim()
            .strip_prefix('t')
            .ok_or_else(|| Error::parse(format!("bad outcome label {s:?}")))?;
        match digits.parse::<u8>() {
            Ok(n) if (n as usize) < OutcomeLabel::MAX => Ok(OutcomeLabel(n)),
            _ => Err(Error::parse(format!("bad outcome label {s:?}"))),
        }
    }
}

/// XOR of a set of outcome labels. Stored sorted and duplicate-free.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Condition(Vec<OutcomeLabel>);

impl Condition {
    /// Builds the XOR of `labels`; a label listed twice cancels.
    pub fn xor_of(labels: impl IntoIterator<Item = OutcomeLabel>) -> Self {
        let mut set = BTreeSet::new();
        for l in labels {
            if !set.remove(&l) {
                set.insert(l);
            }
        }
        Condition(set.into_iter().collect())
    }

    pub fn labels(&self) -> &[OutcomeLabel] {
        &self.0
    }

    pub fn mask(&self) -> u64 {
        self.0.iter().fold(0, |m, l| m | l.bit())
    }

    /// Parity of the condition over a bit vector indexed by label.
    pub fn evaluate(&self, bits: u64) -> bool {
        (self.mask() & bits).count_ones() & 1 == 1
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("^")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// One circuit operation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OperationKind {
    /// Resets `q` to the `+1` eigenstate of `basis`. Part of resource
    /// initialization; never charged noise.
    Prepare {
        basis: Basis,
        q: usize,
    },
    /// Entangles a prepared pair into the given resource state
    /// (Bell: CNOT `a -> b`; cluster: CZ). Noise enters via the input model.
    Entangle2 {
        kind: PairKind,
        a: usize,
        b: usize,
    },
    Gate1 {
        gate: Gate1,
        q: usize,
    },
    /// For CNOT, `a` is the control.
    Gate2 {
        gate: Gate2,
        a: usize,
        b: usize,
    },
    Measure {
        basis: Basis,
        q: usize,
        label: OutcomeLabel,
    },
    /// Joint readout of two qubits, each in the Z basis, counted as one
    /// measurement. Used for the Bell-state measurement of a swap.
    MeasurePair {
        a: usize,
        b: usize,
        label_a: OutcomeLabel,
        label_b: OutcomeLabel,
    },
    /// Applies `pauli` to `target` iff the condition parity is 1.
    Byproduct {
        pauli: Pauli,
        target: usize,
        condition: Condition,
    },
}

impl OperationKind {
    /// Qubits touched, in operand order.
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            OperationKind::Prepare { q, .. }
            | OperationKind::Gate1 { q, .. }
            | OperationKind::Measure { q, .. }
            | OperationKind::Byproduct { target: q, .. } => vec![q],
            OperationKind::Entangle2 { a, b, .. }
            | OperationKind::Gate2 { a, b, .. }
            | OperationKind::MeasurePair { a, b, .. } => vec![a, b],
        }
    }

    /// Labels produced by this operation.
    pub fn produced_labels(&self) -> Vec<OutcomeLabel> {
        match *self {
            OperationKind::Measure { label, .. } => vec![label],
            OperationKind::MeasurePair {
                label_a, label_b, ..
            } => vec![label_a, label_b],
            _ => Vec::new(),
        }
    }

    pub fn is_measurement(&self) -> bool {
        matches!(
            self,
            OperationKind::Measure { .. } | OperationKind::MeasurePair { .. }
        )
    }
}

/// Operations sharing one time step.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimeStep {
    pub operations: Vec<OperationKind>,
}

impl TimeStep {
    /// Bitmask of qubits touched in this step.
    pub fn support(&self) -> u64 {
        self.operations
            .iter()
            .flat_map(|op| op.qubits())
            .fold(0, |m, q| m | (1u64 << q))
    }
}

/// A scheduled protocol circuit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Circuit {
    pub qubit_count: usize,
    pub steps: Vec<TimeStep>,
    pub resource_pairs: Vec<QubitPair>,
    pub outputs: Vec<QubitPair>,
    pub protocol: Option<ProtocolId>,
}

impl Circuit {
    pub fn depth(&self) -> usize {
        self.steps.len()
    }

    /// Operations in program order, tagged with their step.
    pub fn operations(&self) -> impl Iterator<Item = (usize, &OperationKind)> {
        self.steps
            .iter()
            .enumerate()
            .flat_map(|(s, step)| step.operations.iter().map(move |op| (s, op)))
    }

    /// Step at which each label is produced.
    pub fn label_steps(&self) -> BTreeMap<OutcomeLabel, usize> {
        let mut map = BTreeMap::new();
        for (s, op) in self.operations() {
            for l in op.produced_labels() {
                map.entry(l).or_insert(s);
            }
        }
        map
    }

    /// Number of measurement-outcome bits (branches are `2^bits`).
    pub fn outcome_bits(&self) -> usize {
        self.operations()
            .map(|(_, op)| op.produced_labels().len())
            .sum()
    }
}

/// Schedule-level invariant violations reported by [`validate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    QubitOutOfRange {
        step: usize,
        qubit: usize,
    },
    Overlap {
        step: usize,
        qubit: usize,
    },
    SelfInteraction {
        step: usize,
        qubit: usize,
    },
    UseAfterMeasure {
        step: usize,
        qubit: usize,
    },
    DuplicateLabel {
        step: usize,
        label: OutcomeLabel,
    },
    UnknownLabel {
        step: usize,
        label: OutcomeLabel,
    },
    Feedforward {
        step: usize,
        label: OutcomeLabel,
        produced_at: usize,
    },
    UndeclaredEntangle {
        step: usize,
        a: usize,
        b: usize,
    },
    MissingResource {
        a: usize,
        b: usize,
    },
    OverlappingPairs {
        qubit: usize,
    },
    OutputCount {
        found: usize,
    },
    OutputMeasured {
        qubit: usize,
    },
    EmptyCondition {
        step: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::QubitOutOfRange { step, qubit } => {
                write!(f, "step {step}: qubit {qubit} out of range")
            }
            Violation::Overlap { step, qubit } => {
                write!(f, "step {step}: qubit {qubit} used by two operations")
            }
            Violation::SelfInteraction { step, qubit } => {
                write!(f, "step {step}: two-qubit operation on {qubit} twice")
            }
            Violation::UseAfterMeasure { step, qubit } => {
                write!(f, "step {step}: qubit {qubit} used after measurement")
            }
            Violation::DuplicateLabel { step, label } => {
                write!(f, "step {step}: label {label} produced twice")
            }
            Violation::UnknownLabel { step, label } => {
                write!(f, "step {step}: label {label} never produced")
            }
            Violation::Feedforward {
                step,
                label,
                produced_at,
            } => {
                write!(
                    f,
                    "step {step}: byproduct reads {label} produced at step {produced_at}"
                )
            }
            Violation::UndeclaredEntangle { step, a, b } => write!(
                f,
                "step {step}: entangle ({a}, {b}) is not a declared resource"
            ),
            Violation::MissingResource { a, b } => {
                write!(f, "resource pair ({a}, {b}) never entangled")
            }
            Violation::OverlappingPairs { qubit } => {
                write!(f, "qubit {qubit} belongs to two declared pairs")
            }
            Violation::OutputCount { found } => write!(f, "expected 2 output pairs, found {found}"),
            Violation::OutputMeasured { qubit } => write!(f, "output qubit {qubit} is measured"),
            Violation::EmptyCondition { step } => {
                write!(f, "step {step}: byproduct with empty condition")
            }
        }
    }
}

/// Checks every schedule invariant. Never aborts; returns all violations.
pub fn validate(circuit: &Circuit) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = circuit.qubit_count;
    let label_steps = circuit.label_steps();
    let mut produced = BTreeSet::new();
    let mut measured = vec![false; n];
    let mut entangled = BTreeSet::new();

    for (s, step) in circuit.steps.iter().enumerate() {
        let mut used = BTreeSet::new();
        let mut retiring = Vec::new();
        for op in &step.operations {
            let qs = op.qubits();
            if qs.len() == 2 && qs[0] == qs[1] {
                out.push(Violation::SelfInteraction {
                    step: s,
                    qubit: qs[0],
                });
            }
            for &q in &qs {
                if q >= n {
                    out.push(Violation::QubitOutOfRange { step: s, qubit: q });
                    continue;
                }
                if !used.insert(q) && !(qs.len() == 2 && qs[0] == qs[1]) {
                    out.push(Violation::Overlap { step: s, qubit: q });
                }
                if measured[q] {
                    out.push(Violation::UseAfterMeasure { step: s, qubit: q });
                }
            }
            for l in op.produced_labels() {
                if !produced.insert(l) {
                    out.push(Violation::DuplicateLabel { step: s, label: l });
                }
            }
            match op {
                OperationKind::Measure { q, .. } => retiring.push(*q),
                OperationKind::MeasurePair { a, b, .. } => retiring.extend([*a, *b]),
                OperationKind::Entangle2 { kind, a, b } => {
                    let declared = circuit.resource_pairs.iter().any(|p| {
                        p.kind == *kind && ((p.a, p.b) == (*a, *b) || (p.a, p.b) == (*b, *a))
                    });
                    if declared {
                        entangled.insert((*a.min(b), *a.max(b)));
                    } else {
                        out.push(Violation::UndeclaredEntangle {
                            step: s,
                            a: *a,
                            b: *b,
                        });
                    }
                }
                OperationKind::Byproduct { condition, .. } => {
                    if condition.labels().is_empty() {
                        out.push(Violation::EmptyCondition { step: s });
                    }
                    for &l in condition.labels() {
                        match label_steps.get(&l) {
                            None => out.push(Violation::UnknownLabel { step: s, label: l }),
                            Some(&at) if at >= s => out.push(Violation::Feedforward {
                                step: s,
                                label: l,
                                produced_at: at,
                            }),
                            Some(_) => {}
                        }
                    }
                }
                _ => {}
            }
        }
        for q in retiring {
            if q < n {
                measured[q] = true;
            }
        }
    }

    let mut owner = vec![false; n];
    for p in &circuit.resource_pairs {
        if !entangled.contains(&p.ordered()) {
            out.push(Violation::MissingResource { a: p.a, b: p.b });
        }
        for q in [p.a, p.b] {
            if q < n {
                if owner[q] {
                    out.push(Violation::OverlappingPairs { qubit: q });
                }
                owner[q] = true;
            }
        }
    }
    if circuit.outputs.len() != 2 {
        out.push(Violation::OutputCount {
            found: circuit.outputs.len(),
        });
    }
    let mut out_owner = vec![false; n];
    for p in &circuit.outputs {
        for q in [p.a, p.b] {
            if q >= n {
                out.push(Violation::QubitOutOfRange {
                    step: circuit.depth(),
                    qubit: q,
                });
                continue;
            }
            if out_owner[q] {
                out.push(Violation::OverlappingPairs { qubit: q });
            }
            out_owner[q] = true;
            if measured[q] {
                out.push(Violation::OutputMeasured { qubit: q });
            }
        }
    }
    out
}

/// Resource counts in the layout of the protocol comparison table.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircuitStats {
    pub qubits: usize,
    pub entangling_ops: usize,
    /// Explicit single-qubit gates plus byproducts.
    pub single_qubit_gates: usize,
    pub byproduct_count: usize,
    pub two_qubit_gates: usize,
    pub measurements: usize,
    pub depth: usize,
    pub kq: usize,
}

/// Counts operations by category.
///
/// `Prepare` is part of resource initialization and is not counted, but
/// its time steps are: depth and KQ include the two initialization steps.
/// A two-qubit readout counts as one measurement.
pub fn compute_stats(circuit: &Circuit) -> CircuitStats {
    let mut s = CircuitStats {
        qubits: circuit.qubit_count,
        depth: circuit.depth(),
        ..Default::default()
    };
    for (_, op) in circuit.operations() {
        match op {
            OperationKind::Prepare { .. } => {}
            OperationKind::Entangle2 { .. } => s.entangling_ops += 1,
            OperationKind::Gate1 { .. } => s.single_qubit_gates += 1,
            OperationKind::Byproduct { .. } => {
                s.single_qubit_gates += 1;
                s.byproduct_count += 1;
            }
            OperationKind::Gate2 { .. } => s.two_qubit_gates += 1,
            OperationKind::Measure { .. } | OperationKind::MeasurePair { .. } => {
                s.measurements += 1
            }
        }
    }
    s.kq = s.qubits * s.depth;
    s
}

/// Relative depth saving of `a` over `b`: `(b.depth - a.depth) / b.depth`.
pub fn depth_reduction(a: &CircuitStats, b: &CircuitStats) -> f64 {
    assert!(
        b.depth > 0,
        "depth_reduction: reference circuit has zero depth"
    );
    (b.depth as f64 - a.depth as f64) / b.depth as f64
}

/// Program-order operation stream with optional phase barriers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scheduled {
    Op(OperationKind),
    /// Later operations start strictly after every earlier one.
    Barrier,
}

/// Greedy as-soon-as-possible packing.
///
/// Each operation lands in the earliest step after the previous use of
/// each of its qubits, after every measurement feeding its condition, and
/// after the most recent barrier.
pub fn schedule_asap(items: &[Scheduled]) -> Vec<TimeStep> {
    let mut last_use: BTreeMap<usize, usize> = BTreeMap::new();
    let mut label_at: BTreeMap<OutcomeLabel, usize> = BTreeMap::new();
    let mut floor = 0usize;
    let mut horizon = 0usize;
    let mut steps: Vec<TimeStep> = Vec::new();

    for item in items {
        let op = match item {
            Scheduled::Barrier => {
                floor = horizon;
                continue;
            }
            Scheduled::Op(op) => op,
        };
        let mut at = floor;
        for q in op.qubits() {
            if let Some(&s) = last_use.get(&q) {
                at = at.max(s + 1);
            }
        }
        if let OperationKind::Byproduct { condition, .. } = op {
            for l in condition.labels() {
                if let Some(&s) = label_at.get(l) {
                    at = at.max(s + 1);
                }
            }
        }
        for q in op.qubits() {
            last_use.insert(q, at);
        }
        for l in op.produced_labels() {
            label_at.insert(l, at);
        }
        if steps.len() <= at {
            steps.resize_with(at + 1, TimeStep::default);
        }
        steps[at].operations.push(op.clone());
        horizon = horizon.max(at + 1);
    }
    steps
}

/// Re-packs a circuit ASAP from its program order, dropping any slack.
pub fn reschedule_asap(circuit: &Circuit) -> Circuit {
    let items: Vec<Scheduled> = circuit
        .operations()
        .map(|(_, op)| Scheduled::Op(op.clone()))
        .collect();
    Circuit {
        steps: schedule_asap(&items),
        ..circuit.clone()
    }
}
