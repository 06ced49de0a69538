//! Pauli-frame Monte-Carlo executor.
//!
//! A trial tracks the difference between the noisy run and an ideal
//! reference run that sees uniformly random measurement outcomes. Each
//! measurement records `ideal ^ flip`, where `flip` is whether the frame
//! anticommutes with the readout basis. A byproduct multiplies the frame iff
//! the parity of the flips on its condition is odd, which keeps the frame
//! equal to the residual error relative to the ideal output.

mod sweep;

use rand::Rng;

use crate::analysis::fold_table;
use crate::circuit::{Circuit, OperationKind, PairKind, QubitPair};
use crate::noise::{self, NoiseModel};
use crate::pauli::{anticommutes, Basis, Gate1, Gate2, Pauli, PauliFrame, PauliPair};

pub use sweep::{
    run_datapoint, run_datapoint_stream, run_sweep, run_sweep_with, DataPoint, Series, SweepResult,
    SweepSpec, SweptVariable, TerminationRule,
};

/// Result of one Monte-Carlo trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialOutcome {
    /// Residual on each output pair, slots in ascending qubit order.
    pub raw_residual: [PauliPair; 2],
    pub folded_residual: [PauliPair; 2],
    /// Some folded residual is not `II`.
    pub any_error: bool,
}

/// Supplies every random choice a trial makes. The Monte-Carlo source
/// draws from a [`NoiseModel`]; tests script exact faults.
pub trait FaultSource {
    fn initial(&mut self, pair: &QubitPair) -> PauliPair;
    fn gate1(&mut self) -> Pauli;
    fn gate2(&mut self) -> PauliPair;
    fn measurement(&mut self) -> Pauli;
    fn memory(&mut self) -> Pauli;
    fn ideal_outcome(&mut self) -> bool;
    fn charge_byproducts_always(&self) -> bool {
        false
    }
    fn memory_on_active(&self) -> bool {
        false
    }
    /// Called once after every time step.
    fn after_step(&mut self, _step: usize, _frame: &mut PauliFrame) {}
}

/// [`FaultSource`] drawing from a noise model.
pub struct NoisySource<'a, R> {
    pub model: &'a NoiseModel,
    pub rng: R,
}

impl<R: Rng> FaultSource for NoisySource<'_, R> {
    #[inline]
    fn initial(&mut self, pair: &QubitPair) -> PauliPair {
        noise::sample_initial(pair, self.model, &mut self.rng)
    }
    #[inline]
    fn gate1(&mut self) -> Pauli {
        noise::sample_gate1(self.model, &mut self.rng)
    }
    #[inline]
    fn gate2(&mut self) -> PauliPair {
        noise::sample_gate2(self.model, &mut self.rng)
    }
    #[inline]
    fn measurement(&mut self) -> Pauli {
        noise::sample_measurement(self.model, &mut self.rng)
    }
    #[inline]
    fn memory(&mut self) -> Pauli {
        noise::sample_memory(self.model, &mut self.rng)
    }
    #[inline]
    fn ideal_outcome(&mut self) -> bool {
        self.rng.random()
    }
    fn charge_byproducts_always(&self) -> bool {
        self.model.charge_byproducts_always
    }
    fn memory_on_active(&self) -> bool {
        self.model.memory_on_active
    }
}

/// Noise-free source with scripted single-qubit faults injected after
/// chosen steps. Ideal outcomes are all `0`.
#[derive(Debug, Clone, Default)]
pub struct ScriptedFaults {
    /// `(after_step, qubit, pauli)`.
    pub faults: Vec<(usize, usize, Pauli)>,
}

impl FaultSource for ScriptedFaults {
    fn initial(&mut self, _pair: &QubitPair) -> PauliPair {
        PauliPair::IDENTITY
    }
    fn gate1(&mut self) -> Pauli {
        Pauli::I
    }
    fn gate2(&mut self) -> PauliPair {
        PauliPair::IDENTITY
    }
    fn measurement(&mut self) -> Pauli {
        Pauli::I
    }
    fn memory(&mut self) -> Pauli {
        Pauli::I
    }
    fn ideal_outcome(&mut self) -> bool {
        false
    }
    fn after_step(&mut self, step: usize, frame: &mut PauliFrame) {
        for &(s, q, p) in &self.faults {
            if s == step {
                frame.apply(q, p);
            }
        }
    }
}

#[derive(Debug, Clone)]
enum Op {
    Prepare(usize),
    Entangle(usize),
    G1(Gate1, usize),
    G2(Gate2, usize, usize),
    Measure(Basis, usize, u8),
    MeasurePair(usize, usize, u8, u8),
    Byproduct(Pauli, usize, u64),
}

#[derive(Debug, Clone)]
struct Step {
    ops: Vec<Op>,
    /// Live qubits with no operation in this step.
    idle: u64,
    /// Qubits live before and after this step that are operated on.
    active: u64,
}

/// A circuit lowered for the trial hot loop.
#[derive(Debug, Clone)]
pub struct CompiledCircuit {
    n: usize,
    steps: Vec<Step>,
    resources: Vec<QubitPair>,
    /// `(low, high, fold lookup)` per output pair.
    outputs: Vec<(usize, usize, [u8; 16])>,
    output_kinds: Vec<PairKind>,
}

impl CompiledCircuit {
    /// Lowers a circuit; the circuit should already validate.
    pub fn new(circuit: &Circuit) -> Self {
        assert!(
            circuit.qubit_count <= PauliFrame::MAX_QUBITS,
            "too many qubits"
        );
        assert_eq!(
            circuit.outputs.len(),
            2,
            "exactly two output pairs are required"
        );
        let mut live = 0u64;
        let mut steps = Vec::with_capacity(circuit.steps.len());
        for step in &circuit.steps {
            let support = step.support();
            let mut retired = 0u64;
            let mut ops = Vec::with_capacity(step.operations.len());
            for op in &step.operations {
                ops.push(match op {
                    OperationKind::Prepare { q, .. } => Op::Prepare(*q),
                    OperationKind::Entangle2 { a, b, .. } => {
                        let (lo, hi) = (*a.min(b), *a.max(b));
                        let idx = circuit
                            .resource_pairs
                            .iter()
                            .position(|p| p.ordered() == (lo, hi))
                            .expect("entangled pair is a declared resource");
                        Op::Entangle(idx)
                    }
                    OperationKind::Gate1 { gate, q } => Op::G1(*gate, *q),
                    OperationKind::Gate2 { gate, a, b } => Op::G2(*gate, *a, *b),
                    OperationKind::Measure { basis, q, label } => {
                        retired |= 1 << q;
                        Op::Measure(*basis, *q, label.0)
                    }
                    OperationKind::MeasurePair {
                        a,
                        b,
                        label_a,
                        label_b,
                    } => {
                        retired |= (1 << a) | (1 << b);
                        Op::MeasurePair(*a, *b, label_a.0, label_b.0)
                    }
                    OperationKind::Byproduct {
                        pauli,
                        target,
                        condition,
                    } => Op::Byproduct(*pauli, *target, condition.mask()),
                });
            }
            steps.push(Step {
                ops,
                idle: live & !support,
                active: live & support & !retired,
            });
            live = (live | support) & !retired;
        }
        CompiledCircuit {
            n: circuit.qubit_count,
            steps,
            resources: circuit.resource_pairs.clone(),
            outputs: circuit
                .outputs
                .iter()
                .map(|o| {
                    let (lo, hi) = o.ordered();
                    (lo, hi, fold_table(o.kind))
                })
                .collect(),
            output_kinds: circuit.outputs.iter().map(|o| o.kind).collect(),
        }
    }

    pub fn qubit_count(&self) -> usize {
        self.n
    }

    pub fn depth(&self) -> usize {
        self.steps.len()
    }

    pub fn output_kinds(&self) -> &[PairKind] {
        &self.output_kinds
    }

    /// Runs one trial and returns the final frame with the outcome.
    pub fn run_with<S: FaultSource>(&self, src: &mut S) -> (PauliFrame, TrialOutcome) {
        let mut frame = PauliFrame::identity(self.n);
        let mut flips = 0u64;
        let mut ideal = 0u64;
        let always = src.charge_byproducts_always();
        let mem_active = src.memory_on_active();

        for (s, step) in self.steps.iter().enumerate() {
            let mut idle = step.idle;
            if mem_active {
                idle |= step.active;
            }
            for op in &step.ops {
                match *op {
                    Op::Prepare(q) => frame.set(q, Pauli::I),
                    Op::Entangle(i) => {
                        let pair = &self.resources[i];
                        let (lo, hi) = pair.ordered();
                        let e = src.initial(pair);
                        frame.apply_pair(lo, hi, e);
                    }
                    Op::G1(g, q) => {
                        frame.conjugate_1q(q, g);
                        frame.apply(q, src.gate1());
                    }
                    Op::G2(g, a, b) => {
                        frame.conjugate_2q(a, b, g);
                        frame.apply_pair(a, b, src.gate2());
                    }
                    Op::Measure(basis, q, label) => {
                        measure(&mut frame, src, basis, q, label, &mut flips, &mut ideal);
                    }
                    Op::MeasurePair(a, b, la, lb) => {
                        measure(&mut frame, src, Basis::Z, a, la, &mut flips, &mut ideal);
                        measure(&mut frame, src, Basis::Z, b, lb, &mut flips, &mut ideal);
                    }
                    Op::Byproduct(p, q, mask) => {
                        if (flips & mask).count_ones() & 1 == 1 {
                            frame.apply(q, p);
                        }
                        let fired = ((ideal ^ flips) & mask).count_ones() & 1 == 1;
                        if fired || always {
                            frame.apply(q, src.gate1());
                        } else {
                            idle |= 1 << q;
                        }
                    }
                }
            }
            let mut rest = idle;
            while rest != 0 {
                let q = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                frame.apply(q, src.memory());
            }
            src.after_step(s, &mut frame);
        }

        let mut raw = [PauliPair::IDENTITY; 2];
        let mut folded = [PauliPair::IDENTITY; 2];
        for (k, &(lo, hi, ref table)) in self.outputs.iter().enumerate() {
            raw[k] = frame.pair(lo, hi);
            folded[k] = PauliPair::from_index(table[raw[k].index()] as usize);
        }
        let any_error = !folded[0].is_identity() || !folded[1].is_identity();
        (
            frame,
            TrialOutcome {
                raw_residual: raw,
                folded_residual: folded,
                any_error,
            },
        )
    }
}

#[inline]
fn measure<S: FaultSource>(
    frame: &mut PauliFrame,
    src: &mut S,
    basis: Basis,
    q: usize,
    label: u8,
    flips: &mut u64,
    ideal: &mut u64,
) {
    frame.apply(q, src.measurement());
    if anticommutes(frame.get(q), basis) {
        *flips |= 1 << label;
    }
    if src.ideal_outcome() {
        *ideal |= 1 << label;
    }
    frame.set(q, Pauli::I);
}

/// Runs one noisy trial of `circuit`.
pub fn run_trial<R: Rng>(circuit: &Circuit, model: &NoiseModel, rng: &mut R) -> TrialOutcome {
    let compiled = CompiledCircuit::new(circuit);
    compiled.run_with(&mut NoisySource { model, rng }).1
}

/// Output residuals for a noise-free run with the given scripted faults.
pub fn propagate_faults(
    circuit: &CompiledCircuit,
    faults: &[(usize, usize, Pauli)],
) -> TrialOutcome {
    circuit
        .run_with(&mut ScriptedFaults {
            faults: faults.to_vec(),
        })
        .1
}
