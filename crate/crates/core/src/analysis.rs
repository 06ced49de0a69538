//! Residual folding, error-class histograms, fidelity series and threshold
//! extraction.
//!
//! A residual Pauli on an output pair is only observable modulo the pair's
//! stabilizer group, so each residual is folded to a canonical coset
//! representative: the member with the smallest class index under
//! `I < X < Y < Z`. Stabilizer-equivalent residuals fold to `II`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::circuit::{PairKind, ProtocolId};
use crate::engine::DataPoint;
use crate::pauli::PauliPair;

/// Phase-free stabilizer group of an ideal output pair.
pub fn stabilizer_group(kind: PairKind) -> [PauliPair; 4] {
    let [(a1, b1), (a2, b2)] = kind.generators();
    let g1 = PauliPair::new(a1, b1);
    let g2 = PauliPair::new(a2, b2);
    [PauliPair::IDENTITY, g1, g2, g1.compose(g2)]
}

/// Canonical representative of `residual` modulo the stabilizers of `kind`.
pub fn fold(residual: PauliPair, kind: PairKind) -> PauliPair {
    stabilizer_group(kind)
        .iter()
        .map(|s| residual.compose(*s))
        .min_by_key(|p| p.index())
        .expect("group is non-empty")
}

/// Precomputed fold as a class-index lookup.
pub fn fold_table(kind: PairKind) -> [u8; 16] {
    let mut t = [0u8; 16];
    for (i, slot) in t.iter_mut().enumerate() {
        *slot = fold(PauliPair::from_index(i), kind).index() as u8;
    }
    t
}

/// Class counts on one output pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ErrorHistogram {
    pub raw: [u64; 16],
    pub folded: [u64; 16],
}

impl ErrorHistogram {
    pub fn record(&mut self, raw: PauliPair, folded: PauliPair) {
        self.raw[raw.index()] += 1;
        self.folded[folded.index()] += 1;
    }

    pub fn merge(&mut self, other: &ErrorHistogram) {
        for i in 0..16 {
            self.raw[i] += other.raw[i];
            self.folded[i] += other.folded[i];
        }
    }

    pub fn total(&self) -> u64 {
        self.raw.iter().sum()
    }

    /// Rebuilds the folded counts from the raw ones.
    pub fn refold(raw: [u64; 16], kind: PairKind) -> Self {
        let table = fold_table(kind);
        let mut folded = [0u64; 16];
        for (i, &c) in raw.iter().enumerate() {
            folded[table[i] as usize] += c;
        }
        ErrorHistogram { raw, folded }
    }
}

/// Which histogram a query reads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HistogramKind {
    Raw,
    Folded,
}

impl HistogramKind {
    fn counts(self, h: &ErrorHistogram) -> &[u64; 16] {
        match self {
            HistogramKind::Raw => &h.raw,
            HistogramKind::Folded => &h.folded,
        }
    }

    fn tag(self) -> &'static str {
        match self {
            HistogramKind::Raw => "raw",
            HistogramKind::Folded => "fold",
        }
    }
}

/// `1 - errors / trials`, where an error is any non-`II` folded residual.
pub fn joint_fidelity(point: &DataPoint) -> f64 {
    assert!(point.trials > 0, "joint_fidelity: zero trials");
    1.0 - point.errors as f64 / point.trials as f64
}

/// Wilson score interval for `successes / trials` at normal quantile `z`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// 97.5% standard normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

/// First crossing of `level` by the piecewise-linear curve through
/// `points`, which must be sorted by coordinate.
pub fn crossing(points: &[(f64, f64)], level: f64) -> Option<f64> {
    debug_assert!(
        points.windows(2).all(|w| w[0].0 <= w[1].0),
        "series must be sorted"
    );
    if let Some(&(x, y)) = points.first() {
        if y == level {
            return Some(x);
        }
    }
    points.windows(2).find_map(|w| {
        let ((x0, y0), (x1, y1)) = (w[0], w[1]);
        if y1 == level {
            return Some(x1);
        }
        if (y0 < level) != (y1 < level) {
            Some(x0 + (level - y0) * (x1 - x0) / (y1 - y0))
        } else {
            None
        }
    })
}

/// `(coordinate, fidelity)` pairs of a series.
pub fn fidelity_curve(points: &[DataPoint]) -> Vec<(f64, f64)> {
    points.iter().map(|p| (p.coordinate, p.fidelity)).collect()
}

/// Per-class probability along a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassCurve {
    pub class: PauliPair,
    pub values: Vec<(f64, f64)>,
}

/// Class probability at one datapoint, averaged over both output pairs.
pub fn class_probability(point: &DataPoint, kind: HistogramKind, class: PauliPair) -> f64 {
    let count: u64 = point
        .histograms
        .iter()
        .map(|h| kind.counts(h)[class.index()])
        .sum();
    count as f64 / (point.histograms.len() as u64 * point.trials).max(1) as f64
}

/// Class probability on a single output pair.
pub fn output_class_probability(
    point: &DataPoint,
    output: usize,
    kind: HistogramKind,
    class: PauliPair,
) -> f64 {
    kind.counts(&point.histograms[output])[class.index()] as f64 / point.trials.max(1) as f64
}

/// One curve per class, each the output-averaged probability of that
/// class as a function of the swept coordinate.
pub fn distribution_series(points: &[DataPoint], kind: HistogramKind) -> Vec<ClassCurve> {
    PauliPair::all()
        .map(|class| ClassCurve {
            class,
            values: points
                .iter()
                .map(|p| (p.coordinate, class_probability(p, kind, class)))
                .collect(),
        })
        .collect()
}

/// Header of the series CSV; class columns follow when requested.
pub const CSV_HEADER: &str = "coordinate,protocol,trials,errors,fidelity,ci_low,ci_high";

fn class_columns() -> impl Iterator<Item = String> {
    (0..2).flat_map(|o| {
        [HistogramKind::Raw, HistogramKind::Folded]
            .into_iter()
            .flat_map(move |k| PauliPair::all().map(move |c| format!("out{o}_{}_{c}", k.tag())))
    })
}

/// Renders a series as CSV with one row per coordinate.
pub fn series_to_csv(points: &[DataPoint], with_classes: bool) -> String {
    let mut out = String::from(CSV_HEADER);
    if with_classes {
        for col in class_columns() {
            out.push(',');
            out.push_str(&col);
        }
    }
    out.push('\n');
    for p in points {
        let protocol = p.protocol.map(ProtocolId::name).unwrap_or("custom");
        write!(
            out,
            "{},{},{},{},{},{},{}",
            p.coordinate, protocol, p.trials, p.errors, p.fidelity, p.ci_low, p.ci_high
        )
        .unwrap();
        if with_classes {
            for h in &p.histograms {
                for counts in [&h.raw, &h.folded] {
                    for c in counts {
                        write!(out, ",{c}").unwrap();
                    }
                }
            }
        }
        out.push('\n');
    }
    out
}

/// Renders a series as pretty JSON.
pub fn series_to_json(points: &[DataPoint]) -> String {
    serde_json::to_string_pretty(points).expect("datapoints serialize")
}
