//! Named experiments with their expected reference values.
//!
//! Operation and memory sweeps step by 0.05%; input sweeps step by 1%.
//! Unbiased input errors are drawn from the 12 pair errors that change the
//! resource state, so `F_input` is the resource fidelity.
//! Each preset carries the reference values for its experiment so
//! a run can print measured against expected.

use serde::{Deserialize, Serialize};

use crate::circuit::ProtocolId;
use crate::engine::{SweepSpec, SweptVariable, TerminationRule};
use crate::error::{Error, Result};
use crate::noise::InitBias;
use crate::pauli::PauliPair;

/// How a run is plotted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlotKind {
    /// Joint fidelity against the swept coordinate, one line per protocol.
    Fidelity,
    /// Stacked raw error classes on output 0, one chart per protocol.
    Distribution,
}

/// A quoted number to compare a run against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Reference {
    /// Coordinate where the joint fidelity first crosses `level`.
    Crossing {
        protocol: ProtocolId,
        level: f64,
        expected: f64,
        tolerance: f64,
    },
    /// Joint infidelity `1 - F` at a coordinate.
    Infidelity {
        protocol: ProtocolId,
        coordinate: f64,
        expected: f64,
        tolerance: f64,
    },
    /// Raw class probability on output 0 at a coordinate.
    ClassProbability {
        protocol: ProtocolId,
        coordinate: f64,
        class: PauliPair,
        expected: f64,
        tolerance: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentPreset {
    pub name: String,
    pub description: String,
    pub spec: SweepSpec,
    pub plot: PlotKind,
    /// Emit per-class columns in series files.
    pub histograms: bool,
    pub references: Vec<Reference>,
}

impl ExperimentPreset {
    /// Only references whose protocol is part of the sweep.
    pub fn applicable_references(&self) -> impl Iterator<Item = &Reference> {
        self.references
            .iter()
            .filter(|r| self.spec.protocols.contains(&r.protocol()))
    }
}

impl Reference {
    pub fn protocol(&self) -> ProtocolId {
        match *self {
            Reference::Crossing { protocol, .. }
            | Reference::Infidelity { protocol, .. }
            | Reference::ClassProbability { protocol, .. } => protocol,
        }
    }
}

pub const PRESET_NAMES: [&str; 8] = [
    "fig7",
    "fig8",
    "fig9",
    "fig10",
    "fig11",
    "fig13",
    "fig14",
    "appendixB",
];

fn base(swept: SweptVariable, start: f64, stop: f64, step: f64) -> SweepSpec {
    SweepSpec {
        protocols: ProtocolId::ALL.to_vec(),
        swept,
        start,
        stop,
        step,
        f_input: None,
        f_operation: None,
        f_memory: None,
        memory_ideal: false,
        bias: InitBias::UniformObservable,
        charge_byproducts_always: false,
        memory_on_active: false,
        seed: 0,
        rule: TerminationRule::default(),
    }
}

fn input_sweep(bias: InitBias) -> SweepSpec {
    SweepSpec {
        bias,
        ..base(SweptVariable::FInput, 0.50, 1.00, 0.01)
    }
}

fn operation_sweep() -> SweepSpec {
    SweepSpec {
        f_input: Some(0.98),
        ..base(SweptVariable::FOperation, 0.98, 1.00, 0.0005)
    }
}

fn crossing(protocol: ProtocolId, expected: f64, tolerance: f64) -> Reference {
    Reference::Crossing {
        protocol,
        level: 0.5,
        expected,
        tolerance,
    }
}

fn infidelity(protocol: ProtocolId, coordinate: f64, expected: f64) -> Reference {
    Reference::Infidelity {
        protocol,
        coordinate,
        expected,
        tolerance: 0.01,
    }
}

/// Looks up a preset by name, case-insensitively.
pub fn preset(name: &str) -> Result<ExperimentPreset> {
    use ProtocolId::*;
    let key = name.to_ascii_lowercase();
    let (description, spec, plot, histograms, references) = match key.as_str() {
        "fig7" => (
            "Z errors on odd-indexed input qubits, ideal local operations",
            input_sweep(InitBias::ZOnOdd),
            PlotKind::Fidelity,
            false,
            vec![],
        ),
        "fig8" => (
            "X errors on odd-indexed input qubits, ideal local operations",
            input_sweep(InitBias::XOnOdd),
            PlotKind::Fidelity,
            false,
            vec![
                Reference::Infidelity {
                    protocol: Mqnc,
                    coordinate: 0.5,
                    expected: 1.0 - 0.0625,
                    tolerance: 0.005,
                },
                Reference::Infidelity {
                    protocol: Esp,
                    coordinate: 0.5,
                    expected: 1.0 - 0.0625,
                    tolerance: 0.005,
                },
                Reference::Infidelity {
                    protocol: Qnc,
                    coordinate: 0.5,
                    expected: 0.75,
                    tolerance: 0.005,
                },
                Reference::Infidelity {
                    protocol: Es,
                    coordinate: 0.5,
                    expected: 0.75,
                    tolerance: 0.005,
                },
            ],
        ),
        "fig9" => (
            "uniform observable input errors, ideal local operations",
            input_sweep(InitBias::UniformObservable),
            PlotKind::Fidelity,
            false,
            vec![
                crossing(Esp, 0.87, 0.01),
                crossing(Es, 0.89, 0.01),
                crossing(Mqnc, 0.89, 0.01),
                crossing(Qnc, 0.91, 0.01),
            ],
        ),
        "fig10" => (
            "total error model at F_input = 98%, gates, readout and memory swept together",
            operation_sweep(),
            PlotKind::Fidelity,
            false,
            vec![
                crossing(Mqnc, 0.989, 0.0015),
                infidelity(Mqnc, 0.9995, 0.139),
                infidelity(Esp, 0.9995, 0.107),
                infidelity(Es, 0.9995, 0.144),
                infidelity(Qnc, 0.9995, 0.202),
            ],
        ),
        "fig11" => (
            "MQNC raw error classes on output (0,5) under the total error model at F_input = 98%",
            SweepSpec {
                protocols: vec![Mqnc],
                ..operation_sweep()
            },
            PlotKind::Distribution,
            true,
            vec![
                Reference::ClassProbability {
                    protocol: Mqnc,
                    coordinate: 1.0,
                    class: PauliPair::new(crate::pauli::Pauli::Z, crate::pauli::Pauli::Z),
                    expected: 0.0003,
                    tolerance: 0.0003,
                },
                Reference::ClassProbability {
                    protocol: Mqnc,
                    coordinate: 1.0,
                    class: PauliPair::new(crate::pauli::Pauli::X, crate::pauli::Pauli::X),
                    expected: 0.0036,
                    tolerance: 0.001,
                },
            ],
        ),
        "fig13" => (
            "total error model with ideal memory at F_input = 98%",
            SweepSpec {
                memory_ideal: true,
                ..operation_sweep()
            },
            PlotKind::Fidelity,
            false,
            vec![],
        ),
        "fig14" => (
            "memory sweep at F_operation = 99%, F_input = 98%",
            SweepSpec {
                f_input: Some(0.98),
                f_operation: Some(0.99),
                ..base(SweptVariable::FMemory, 0.98, 1.00, 0.0005)
            },
            PlotKind::Fidelity,
            false,
            vec![],
        ),
        "appendixb" => (
            "raw and folded error classes at F_input = 50%, ideal local operations",
            base(SweptVariable::FInput, 0.50, 0.50, 0.01),
            PlotKind::Distribution,
            true,
            vec![],
        ),
        _ => return Err(Error::UnknownPreset(name.to_string())),
    };
    let name = PRESET_NAMES
        .iter()
        .find(|n| n.eq_ignore_ascii_case(&key))
        .expect("matched above")
        .to_string();
    Ok(ExperimentPreset {
        name,
        description: description.to_string(),
        spec,
        plot,
        histograms,
        references,
    })
}

/// Every preset in a fixed order.
pub fn all_presets() -> Vec<ExperimentPreset> {
    PRESET_NAMES
        .iter()
        .map(|n| preset(n).expect("built-in preset"))
        .collect()
}
