//! Datapoint and sweep drivers with reproducible parallel seeding.
//!
//! Trial `t` of a datapoint draws from a ChaCha8 generator keyed by
//! `(seed, stream)` and positioned on stream `t`, so each trial's result
//! depends only on those three numbers. Trials run in parallel chunks and
//! are merged strictly in trial order; the termination rule is applied
//! during the merge, which makes every datapoint independent of the worker
//! count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{wilson_interval, ErrorHistogram, Z_95};
use crate::circuit::{build_protocol, Circuit, ProtocolId};
use crate::error::{Error, Result};
use crate::noise::{InitBias, NoiseModel};

use super::{CompiledCircuit, NoisySource};

/// Stop after `max_errors` erroneous trials or `max_trials` trials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TerminationRule {
    pub max_errors: u64,
    pub max_trials: u64,
}

impl Default for TerminationRule {
    fn default() -> Self {
        TerminationRule {
            max_errors: 20_000,
            max_trials: 1_000_000,
        }
    }
}

/// Aggregated result at one sweep coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataPoint {
    pub coordinate: f64,
    pub protocol: Option<ProtocolId>,
    pub trials: u64,
    pub errors: u64,
    pub fidelity: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// One histogram per output pair.
    pub histograms: [ErrorHistogram; 2],
}

const CHUNK: u64 = 2048;

fn splitmix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn stream_key(seed: u64, stream: u64) -> [u8; 32] {
    let mut state = seed ^ stream.wrapping_mul(0xD1B5_4A32_D192_ED03);
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix(&mut state).to_le_bytes());
    }
    key
}

/// Generator for trial `trial` of datapoint stream `stream`.
pub(crate) fn trial_rng(key: &[u8; 32], trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::from_seed(*key);
    rng.set_stream(trial);
    rng
}

/// Packed raw residual classes, output 0 in the low nibble.
fn run_chunk(
    compiled: &CompiledCircuit,
    model: &NoiseModel,
    key: &[u8; 32],
    start: u64,
    len: u64,
) -> Vec<u8> {
    (start..start + len)
        .map(|t| {
            let mut src = NoisySource {
                model,
                rng: trial_rng(key, t),
            };
            let (_, out) = compiled.run_with(&mut src);
            (out.raw_residual[0].index() | (out.raw_residual[1].index() << 4)) as u8
        })
        .collect()
}

/// Runs one datapoint on stream `0`.
pub fn run_datapoint(
    circuit: &Circuit,
    model: &NoiseModel,
    rule: &TerminationRule,
    seed: u64,
) -> DataPoint {
    let compiled = CompiledCircuit::new(circuit);
    run_datapoint_stream(&compiled, model, rule, seed, 0, 0.0, circuit.protocol)
}

/// Runs one datapoint on an explicit RNG stream.
pub fn run_datapoint_stream(
    compiled: &CompiledCircuit,
    model: &NoiseModel,
    rule: &TerminationRule,
    seed: u64,
    stream: u64,
    coordinate: f64,
    protocol: Option<ProtocolId>,
) -> DataPoint {
    assert!(
        rule.max_trials > 0 && rule.max_errors > 0,
        "termination rule must be positive"
    );
    let key = stream_key(seed, stream);
    let tables: Vec<[u8; 16]> = compiled.outputs.iter().map(|o| o.2).collect();
    let wave = (rayon::current_num_threads() as u64 * 2).max(1);

    let mut raw = [[0u64; 16]; 2];
    let mut trials = 0u64;
    let mut errors = 0u64;
    let mut next = 0u64;
    'outer: while trials < rule.max_trials && errors < rule.max_errors {
        let chunks: Vec<(u64, u64)> = (0..wave)
            .map(|i| next + i * CHUNK)
            .filter(|&s| s < rule.max_trials)
            .map(|s| (s, CHUNK.min(rule.max_trials - s)))
            .collect();
        next += wave * CHUNK;
        let results: Vec<Vec<u8>> = chunks
            .par_iter()
            .map(|&(s, len)| run_chunk(compiled, model, &key, s, len))
            .collect();
        for packed in results.iter().flatten() {
            let (c0, c1) = ((packed & 0xF) as usize, (packed >> 4) as usize);
            raw[0][c0] += 1;
            raw[1][c1] += 1;
            trials += 1;
            if tables[0][c0] != 0 || tables[1][c1] != 0 {
                errors += 1;
            }
            if trials >= rule.max_trials || errors >= rule.max_errors {
                break 'outer;
            }
        }
    }

    let kinds = compiled.output_kinds();
    let histograms = [
        ErrorHistogram::refold(raw[0], kinds[0]),
        ErrorHistogram::refold(raw[1], kinds[1]),
    ];
    let (ci_low, ci_high) = wilson_interval(trials - errors, trials, Z_95);
    DataPoint {
        coordinate,
        protocol,
        trials,
        errors,
        fidelity: 1.0 - errors as f64 / trials as f64,
        ci_low,
        ci_high,
        histograms,
    }
}

/// Knob varied along a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweptVariable {
    FInput,
    FOperation,
    FMemory,
}

impl std::fmt::Display for SweptVariable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SweptVariable::FInput => "F_input",
            SweptVariable::FOperation => "F_operation",
            SweptVariable::FMemory => "F_memory",
        })
    }
}

/// A one-dimensional fidelity sweep.
///
/// Coordinates map to probabilities via `p = 1 - F`. Sweeping
/// `FOperation` sets gate, readout and memory rates together unless
/// `memory_ideal` or `f_memory` pins memory. Unset fixed knobs default to
/// perfect (`1.0`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub protocols: Vec<ProtocolId>,
    pub swept: SweptVariable,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
    #[serde(default)]
    pub f_input: Option<f64>,
    #[serde(default)]
    pub f_operation: Option<f64>,
    #[serde(default)]
    pub f_memory: Option<f64>,
    #[serde(default)]
    pub memory_ideal: bool,
    #[serde(default)]
    pub bias: InitBias,
    #[serde(default)]
    pub charge_byproducts_always: bool,
    #[serde(default)]
    pub memory_on_active: bool,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub rule: TerminationRule,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidSweep(m));
        if self.protocols.is_empty() {
            return bad("no protocols".into());
        }
        if self.step.is_nan() || self.step <= 0.0 {
            return bad(format!("step {} must be positive", self.step));
        }
        if self.start.is_nan() || self.stop.is_nan() || self.start > self.stop {
            return bad(format!("start {} exceeds stop {}", self.start, self.stop));
        }
        for (name, v) in [
            ("start", Some(self.start)),
            ("stop", Some(self.stop)),
            ("f_input", self.f_input),
            ("f_operation", self.f_operation),
            ("f_memory", self.f_memory),
        ] {
            if let Some(v) = v {
                if !(0.0..=1.0).contains(&v) {
                    return bad(format!("{name} = {v} is not a fidelity"));
                }
            }
        }
        let fixed = match self.swept {
            SweptVariable::FInput => self.f_input,
            SweptVariable::FOperation => self.f_operation,
            SweptVariable::FMemory => self.f_memory,
        };
        if fixed.is_some() {
            return bad(format!("{} is both swept and fixed", self.swept));
        }
        if self.swept == SweptVariable::FMemory && self.memory_ideal {
            return bad("memory is swept but marked ideal".into());
        }
        if self.memory_ideal && self.f_memory.is_some() {
            return bad("memory_ideal conflicts with f_memory".into());
        }
        if self.rule.max_errors == 0 || self.rule.max_trials == 0 {
            return bad("termination limits must be positive".into());
        }
        Ok(())
    }

    /// Grid `start, start + step, ...` up to `stop` inclusive.
    pub fn coordinates(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..n)
            .map(|i| ((self.start + i as f64 * self.step) * 1e9).round() / 1e9)
            .collect()
    }

    /// Noise model at one coordinate.
    pub fn model_at(&self, coordinate: f64) -> NoiseModel {
        let f_input = if self.swept == SweptVariable::FInput {
            coordinate
        } else {
            self.f_input.unwrap_or(1.0)
        };
        let f_op = if self.swept == SweptVariable::FOperation {
            coordinate
        } else {
            self.f_operation.unwrap_or(1.0)
        };
        let f_mem = if self.swept == SweptVariable::FMemory {
            coordinate
        } else {
            self.f_memory.unwrap_or(f_op)
        };
        let p_op = 1.0 - f_op;
        NoiseModel {
            p_init: 1.0 - f_input,
            init_bias: self.bias,
            p_gate1: p_op,
            p_gate2: p_op,
            p_meas: p_op,
            p_mem: if self.memory_ideal { 0.0 } else { 1.0 - f_mem },
            memory_ideal: self.memory_ideal,
            charge_byproducts_always: self.charge_byproducts_always,
            memory_on_active: self.memory_on_active,
        }
    }
}

/// Datapoints of one protocol along a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub protocol: ProtocolId,
    pub points: Vec<DataPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub spec: SweepSpec,
    pub series: Vec<Series>,
}

impl SweepResult {
    pub fn series_for(&self, protocol: ProtocolId) -> Option<&Series> {
        self.series.iter().find(|s| s.protocol == protocol)
    }
}

/// Runs every protocol at every coordinate. Invalid specs are rejected
/// before any trial runs.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    run_sweep_with(spec, |_, _| {})
}

/// [`run_sweep`] with a callback after each datapoint.
pub fn run_sweep_with(
    spec: &SweepSpec,
    mut progress: impl FnMut(ProtocolId, &DataPoint),
) -> Result<SweepResult> {
    spec.validate()?;
    let coords = spec.coordinates();
    let mut series = Vec::with_capacity(spec.protocols.len());
    for &protocol in &spec.protocols {
        let compiled = CompiledCircuit::new(&build_protocol(protocol));
        let mut points = Vec::with_capacity(coords.len());
        for (i, &x) in coords.iter().enumerate() {
            let model = spec.model_at(x);
            model.validate()?;
            let stream = ((i as u64) << 8) | protocol.code();
            let p = run_datapoint_stream(
                &compiled,
                &model,
                &spec.rule,
                spec.seed,
                stream,
                x,
                Some(protocol),
            );
            progress(protocol, &p);
            points.push(p);
        }
        series.push(Series { protocol, points });
    }
    Ok(SweepResult {
        spec: spec.clone(),
        series,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec() -> SweepSpec {
        SweepSpec {
            protocols: vec![ProtocolId::Esp],
            swept: SweptVariable::FOperation,
            start: 0.98,
            stop: 1.0,
            step: 0.0005,
            f_input: Some(0.98),
            f_operation: None,
            f_memory: None,
            memory_ideal: false,
            bias: InitBias::UniformAll15,
            charge_byproducts_always: false,
            memory_on_active: false,
            seed: 1,
            rule: TerminationRule::default(),
        }
    }

    #[test]
    fn operation_grid_has_41_points() {
        let c = spec().coordinates();
        assert_eq!(c.len(), 41);
        assert_eq!(c[0], 0.98);
        assert_eq!(*c.last().unwrap(), 1.0);
    }

    #[test]
    fn degenerate_grid_is_one_point() {
        let s = SweepSpec {
            start: 0.5,
            stop: 0.5,
            ..spec()
        };
        assert_eq!(s.coordinates(), vec![0.5]);
    }

    #[test]
    fn invalid_specs_are_rejected() {
        assert!(SweepSpec {
            step: 0.0,
            ..spec()
        }
        .validate()
        .is_err());
        assert!(SweepSpec {
            start: 1.0,
            stop: 0.9,
            ..spec()
        }
        .validate()
        .is_err());
        assert!(SweepSpec {
            f_operation: Some(0.99),
            ..spec()
        }
        .validate()
        .is_err());
        assert!(SweepSpec {
            swept: SweptVariable::FMemory,
            memory_ideal: true,
            f_operation: Some(0.99),
            ..spec()
        }
        .validate()
        .is_err());
        assert!(run_sweep(&SweepSpec {
            protocols: vec![],
            ..spec()
        })
        .is_err());
    }

    #[test]
    fn operation_sweep_sets_rates_jointly() {
        let m = spec().model_at(0.99);
        assert!((m.p_init - 0.02).abs() < 1e-12);
        for p in [m.p_gate1, m.p_gate2, m.p_meas, m.p_mem] {
            assert!((p - 0.01).abs() < 1e-12);
        }
        let ideal = SweepSpec {
            memory_ideal: true,
            ..spec()
        }
        .model_at(0.99);
        assert_eq!(ideal.memory_probability(), 0.0);
    }

    #[test]
    fn every_trial_errs_stops_at_max_errors() {
        let c = build_protocol(ProtocolId::Esp);
        let model = NoiseModel {
            p_gate1: 1.0,
            p_init: 1.0,
            init_bias: InitBias::XOnOdd,
            ..NoiseModel::ideal()
        };
        let rule = TerminationRule {
            max_errors: 5000,
            max_trials: 1_000_000,
        };
        let p = run_datapoint(&c, &model, &rule, 3);
        assert!(p.errors == 5000 && p.trials < 1_000_000);
        let total: u64 = p.histograms[0].raw.iter().sum();
        assert_eq!(total, p.trials);
    }
}
