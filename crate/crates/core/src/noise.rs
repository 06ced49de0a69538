//! Pauli noise model and samplers.
//!
//! Five sources: imperfect input resources (`p_init`, with an optional
//! bias), single- and two-qubit gate depolarization, pre-readout
//! measurement errors and per-step memory errors on idle qubits (optionally
//! on every live qubit). Every
//! probability follows the convention `F = 1 - p`.

use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::QubitPair;
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliPair};

/// Shape of input-resource errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitBias {
    /// Uniform over the 15 non-identity pairs.
    #[default]
    #[serde(alias = "UniformAll15", alias = "uniform")]
    UniformAll15,
    /// Uniform over the 12 pair errors that act non-trivially on the
    /// resource state, so that `1 - p_init` is its fidelity.
    #[serde(alias = "UniformObservable", alias = "observable")]
    UniformObservable,
    /// `Z` on the odd-indexed qubit of the pair.
    #[serde(alias = "Z_on_odd")]
    ZOnOdd,
    /// `X` on the odd-indexed qubit of the pair.
    #[serde(alias = "X_on_odd")]
    XOnOdd,
}

impl std::str::FromStr for InitBias {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "uniform" | "uniform_all15" | "uniformall15" => Ok(InitBias::UniformAll15),
            "observable" | "uniform_observable" | "uniformobservable" => {
                Ok(InitBias::UniformObservable)
            }
            "z_on_odd" | "zonodd" => Ok(InitBias::ZOnOdd),
            "x_on_odd" | "xonodd" => Ok(InitBias::XOnOdd),
            _ => Err(Error::InvalidNoise(format!("unknown init_bias {s:?}"))),
        }
    }
}

/// Probabilities for every error source.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseModel {
    /// Per resource pair.
    pub p_init: f64,
    pub init_bias: InitBias,
    pub p_gate1: f64,
    pub p_gate2: f64,
    pub p_meas: f64,
    /// Per idle, unmeasured qubit per time step.
    pub p_mem: f64,
    /// Idle qubits never decohere when set.
    pub memory_ideal: bool,
    /// Charge byproduct gates noise even in trials where they do not fire.
    pub charge_byproducts_always: bool,
    /// Also charge memory error on operated qubits that stay live through
    /// the step. Off by default; see the README on memory charging.
    pub memory_on_active: bool,
}

impl Default for NoiseModel {
    fn default() -> Self {
        NoiseModel::ideal()
    }
}

impl NoiseModel {
    /// All probabilities zero.
    pub const fn ideal() -> Self {
        NoiseModel {
            p_init: 0.0,
            init_bias: InitBias::UniformAll15,
            p_gate1: 0.0,
            p_gate2: 0.0,
            p_meas: 0.0,
            p_mem: 0.0,
            memory_ideal: false,
            charge_byproducts_always: false,
            memory_on_active: false,
        }
    }

    /// Input errors only, at input fidelity `f_input`.
    pub fn input_only(f_input: f64, bias: InitBias) -> Self {
        NoiseModel {
            p_init: 1.0 - f_input,
            init_bias: bias,
            ..NoiseModel::ideal()
        }
    }

    /// Input fidelity `f_input`; gates, readout and memory all at `f_op`.
    pub fn total(f_input: f64, f_op: f64) -> Self {
        let p = 1.0 - f_op;
        NoiseModel {
            p_init: 1.0 - f_input,
            p_gate1: p,
            p_gate2: p,
            p_meas: p,
            p_mem: p,
            ..NoiseModel::ideal()
        }
    }

    /// Rejects probabilities outside `[0, 1]` or non-finite.
    pub fn validate(&self) -> Result<()> {
        for (name, p) in [
            ("p_init", self.p_init),
            ("p_gate1", self.p_gate1),
            ("p_gate2", self.p_gate2),
            ("p_meas", self.p_meas),
            ("p_mem", self.p_mem),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidNoise(format!(
                    "{name} = {p} is not a probability"
                )));
            }
        }
        Ok(())
    }

    /// Effective memory error probability.
    pub fn memory_probability(&self) -> f64 {
        if self.memory_ideal {
            0.0
        } else {
            self.p_mem
        }
    }

    /// Parses a TOML key-value config and validates it.
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let model: NoiseModel = toml::from_str(s)?;
        model.validate()?;
        Ok(model)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("noise model serializes")
    }
}

#[inline]
fn fires<R: Rng + ?Sized>(p: f64, rng: &mut R) -> bool {
    p > 0.0 && rng.random::<f64>() < p
}

#[inline]
fn uniform_nonidentity<R: Rng + ?Sized>(rng: &mut R) -> Pauli {
    Pauli::NON_IDENTITY[rng.random_range(0..3)]
}

#[inline]
fn uniform_nonidentity_pair<R: Rng + ?Sized>(rng: &mut R) -> PauliPair {
    PauliPair::from_index(rng.random_range(1..16))
}

/// `X`, `Y`, `Z` each with probability `p / 3`.
#[inline]
pub fn sample_depolarizing<R: Rng + ?Sized>(p: f64, rng: &mut R) -> Pauli {
    if fires(p, rng) {
        uniform_nonidentity(rng)
    } else {
        Pauli::I
    }
}

/// Input-resource error for `pair`, in ascending-qubit slot order.
///
/// Biased modes place the error on the odd-indexed qubit; if both or
/// neither qubit is odd, the higher index is used.
pub fn sample_initial<R: Rng + ?Sized>(
    pair: &QubitPair,
    model: &NoiseModel,
    rng: &mut R,
) -> PauliPair {
    if !fires(model.p_init, rng) {
        return PauliPair::IDENTITY;
    }
    let (lo, hi) = pair.ordered();
    let on_low = lo % 2 == 1 && hi % 2 == 0;
    let single = |p: Pauli| {
        if on_low {
            PauliPair::new(p, Pauli::I)
        } else {
            PauliPair::new(Pauli::I, p)
        }
    };
    match model.init_bias {
        InitBias::UniformAll15 => uniform_nonidentity_pair(rng),
        InitBias::UniformObservable => {
            let [g1, g2] = pair.kind.generators().map(|(a, b)| PauliPair::new(a, b));
            // Rejection from the 15; stabilizers commute with both generators.
            loop {
                let e = uniform_nonidentity_pair(rng);
                if e.anticommutes_with(g1) || e.anticommutes_with(g2) {
                    break e;
                }
            }
        }
        InitBias::ZOnOdd => single(Pauli::Z),
        InitBias::XOnOdd => single(Pauli::X),
    }
}

pub fn sample_gate1<R: Rng + ?Sized>(model: &NoiseModel, rng: &mut R) -> Pauli {
    sample_depolarizing(model.p_gate1, rng)
}

/// `II` with probability `1 - p_gate2`, else uniform over the 15 others.
pub fn sample_gate2<R: Rng + ?Sized>(model: &NoiseModel, rng: &mut R) -> PauliPair {
    if fires(model.p_gate2, rng) {
        uniform_nonidentity_pair(rng)
    } else {
        PauliPair::IDENTITY
    }
}

/// Pauli applied to a qubit immediately before its readout.
pub fn sample_measurement<R: Rng + ?Sized>(model: &NoiseModel, rng: &mut R) -> Pauli {
    sample_depolarizing(model.p_meas, rng)
}

/// Error on one idle qubit for one time step.
pub fn sample_memory<R: Rng + ?Sized>(model: &NoiseModel, rng: &mut R) -> Pauli {
    sample_depolarizing(model.memory_probability(), rng)
}
