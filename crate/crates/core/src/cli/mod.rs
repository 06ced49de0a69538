//! Command implementations behind the `mqnc` binary.
//!
//! Each command returns its output instead of printing, so the binary stays
//! a thin argument parser and the examples and tests can call the same
//! code. `cmd_run` writes one series file per protocol, a text summary, a
//! JSON run report and optional SVG charts.

pub mod presets;
pub mod svg;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::analysis::{
    crossing, fidelity_curve, output_class_probability, series_to_csv, series_to_json,
    HistogramKind,
};
use crate::circuit::{build_protocol, compute_stats, depth_reduction, ProtocolId};
use crate::engine::{run_sweep_with, DataPoint, SweepResult, SweepSpec, SweptVariable};
use crate::error::{Error, Result};
use crate::pauli::PauliPair;
use crate::tableau::{verify_all, VerificationReport};

pub use presets::{all_presets, preset, ExperimentPreset, PlotKind, Reference, PRESET_NAMES};

/// Environment variable naming the default output directory of `run`.
pub const OUT_DIR_ENV: &str = "MQNC_OUT_DIR";

/// Output directory used when `--out` is not given.
pub fn default_out_dir() -> PathBuf {
    std::env::var_os(OUT_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("mqnc-out"))
}

/// Resource table for all four protocols plus the MQNC depth saving.
pub fn cmd_stats() -> String {
    let mut out = String::new();
    writeln!(
        out,
        "{:<9}{:>7}{:>12}{:>22}{:>10}{:>14}{:>7}{:>6}",
        "protocol",
        "qubits",
        "entangling",
        "1q gates (byproduct)",
        "2q gates",
        "measurements",
        "depth",
        "KQ"
    )
    .unwrap();
    let stats = ProtocolId::ALL.map(|id| (id, compute_stats(&build_protocol(id))));
    for (id, s) in &stats {
        writeln!(
            out,
            "{:<9}{:>7}{:>12}{:>22}{:>10}{:>14}{:>7}{:>6}",
            id.name(),
            s.qubits,
            s.entangling_ops,
            format!("{} ({})", s.single_qubit_gates, s.byproduct_count),
            s.two_qubit_gates,
            s.measurements,
            s.depth,
            s.kq
        )
        .unwrap();
    }
    let (mqnc, qnc) = (&stats[0].1, &stats[1].1);
    writeln!(
        out,
        "depth reduction {:.1}% (MQNC depth {} vs QNC depth {})",
        100.0 * depth_reduction(mqnc, qnc),
        mqnc.depth,
        qnc.depth
    )
    .unwrap();
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Text,
    Json,
}

/// Renders verification reports; the flag is true iff all passed.
pub fn render_verification(reports: &[VerificationReport], format: ReportFormat) -> (String, bool) {
    let passed = reports.iter().all(VerificationReport::passed);
    let text = match format {
        ReportFormat::Text => {
            let mut s: String = reports.iter().map(|r| r.to_string()).collect();
            writeln!(
                s,
                "{}",
                if passed {
                    "all protocols verified"
                } else {
                    "verification FAILED"
                }
            )
            .unwrap();
            s
        }
        ReportFormat::Json => {
            serde_json::to_string_pretty(reports).expect("reports serialize") + "\n"
        }
    };
    (text, passed)
}

/// Tableau verification of every built-in protocol.
pub fn cmd_verify(format: ReportFormat) -> (String, bool) {
    render_verification(&verify_all(), format)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeriesFormat {
    #[default]
    Csv,
    Json,
}

impl SeriesFormat {
    fn extension(self) -> &'static str {
        match self {
            SeriesFormat::Csv => "csv",
            SeriesFormat::Json => "json",
        }
    }
}

impl std::str::FromStr for SeriesFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(SeriesFormat::Csv),
            "json" => Ok(SeriesFormat::Json),
            _ => Err(Error::parse(format!("unknown format {s:?}"))),
        }
    }
}

/// A custom experiment read from TOML: a `name`, optional `plot` and
/// `histograms`, and a `[sweep]` table with the fields of [`SweepSpec`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_config_name")]
    pub name: String,
    #[serde(default)]
    pub description: String,
    #[serde(default)]
    pub histograms: bool,
    #[serde(default = "default_plot")]
    pub plot: PlotKind,
    pub sweep: SweepSpec,
}

fn default_config_name() -> String {
    "custom".into()
}

fn default_plot() -> PlotKind {
    PlotKind::Fidelity
}

impl RunConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(s)?;
        cfg.sweep.validate()?;
        if cfg.name.is_empty() || cfg.name.contains(['/', '\\']) {
            return Err(Error::InvalidSweep(format!("bad run name {:?}", cfg.name)));
        }
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    fn into_preset(self) -> ExperimentPreset {
        ExperimentPreset {
            name: self.name,
            description: self.description,
            spec: self.sweep,
            plot: self.plot,
            histograms: self.histograms,
            references: vec![],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunSource {
    Preset(String),
    Config(PathBuf),
}

/// Options of `cmd_run`; `None` keeps the preset's value.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub source: RunSource,
    pub seed: Option<u64>,
    pub max_trials: Option<u64>,
    pub max_errors: Option<u64>,
    pub protocols: Option<Vec<ProtocolId>>,
    pub out_dir: Option<PathBuf>,
    pub format: SeriesFormat,
    pub svg: bool,
}

impl RunOptions {
    pub fn preset(name: &str) -> Self {
        RunOptions {
            source: RunSource::Preset(name.to_string()),
            seed: None,
            max_trials: None,
            max_errors: None,
            protocols: None,
            out_dir: None,
            format: SeriesFormat::Csv,
            svg: false,
        }
    }

    /// Resolves the source and applies overrides.
    pub fn resolve(&self) -> Result<ExperimentPreset> {
        let mut p = match &self.source {
            RunSource::Preset(name) => preset(name)?,
            RunSource::Config(path) => RunConfig::from_file(path)?.into_preset(),
        };
        if let Some(seed) = self.seed {
            p.spec.seed = seed;
        }
        if let Some(n) = self.max_trials {
            p.spec.rule.max_trials = n;
        }
        if let Some(n) = self.max_errors {
            p.spec.rule.max_errors = n;
        }
        if let Some(protocols) = &self.protocols {
            p.spec.protocols = protocols.clone();
        }
        p.spec.validate()?;
        Ok(p)
    }
}

/// A reference value set against its measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub description: String,
    /// `None` when the sweep did not cover the reference point.
    pub measured: Option<f64>,
    pub expected: f64,
    pub tolerance: f64,
    pub within: bool,
}

impl std::fmt::Display for Comparison {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let measured = self
            .measured
            .map(|m| format!("{:.4}", m))
            .unwrap_or_else(|| "n/a".into());
        write!(
            f,
            "{}: measured {measured}, expected {:.4} +- {:.4} [{}]",
            self.description,
            self.expected,
            self.tolerance,
            if self.within { "within" } else { "OUTSIDE" }
        )
    }
}

fn point_at(points: &[DataPoint], coordinate: f64) -> Option<&DataPoint> {
    points
        .iter()
        .find(|p| (p.coordinate - coordinate).abs() < 1e-9)
}

/// Checks each reference of `preset` against `result`.
pub fn compare_references(preset: &ExperimentPreset, result: &SweepResult) -> Vec<Comparison> {
    let axis = result.spec.swept;
    preset
        .applicable_references()
        .map(|r| {
            let points = result
                .series_for(r.protocol())
                .map(|s| s.points.as_slice())
                .unwrap_or(&[]);
            let (description, measured, expected, tolerance) = match *r {
                Reference::Crossing {
                    protocol,
                    level,
                    expected,
                    tolerance,
                } => (
                    format!("{protocol} {:.0}% crossing in {axis}", level * 100.0),
                    // Fidelity rises with the coordinate, so the first crossing is the threshold.
                    crossing(&fidelity_curve(points), level),
                    expected,
                    tolerance,
                ),
                Reference::Infidelity {
                    protocol,
                    coordinate,
                    expected,
                    tolerance,
                } => (
                    format!("{protocol} infidelity at {axis} = {coordinate}"),
                    point_at(points, coordinate).map(|p| 1.0 - p.fidelity),
                    expected,
                    tolerance,
                ),
                Reference::ClassProbability {
                    protocol,
                    coordinate,
                    class,
                    expected,
                    tolerance,
                } => (
                    format!("{protocol} raw P({class}) on output 0 at {axis} = {coordinate}"),
                    point_at(points, coordinate)
                        .map(|p| output_class_probability(p, 0, HistogramKind::Raw, class)),
                    expected,
                    tolerance,
                ),
            };
            let within = measured.is_some_and(|m| (m - expected).abs() <= tolerance + 1e-12);
            Comparison {
                description,
                measured,
                expected,
                tolerance,
                within,
            }
        })
        .collect()
}

/// Artifacts and headline numbers of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub preset: String,
    pub seed: u64,
    pub wall_time_secs: f64,
    pub series_files: Vec<(ProtocolId, PathBuf)>,
    pub summary_file: PathBuf,
    pub report_file: PathBuf,
    pub svg_files: Vec<PathBuf>,
    pub summary: Vec<String>,
    pub comparisons: Vec<Comparison>,
}

impl RunReport {
    /// Every artifact path named by the report.
    pub fn files(&self) -> impl Iterator<Item = &PathBuf> {
        self.series_files
            .iter()
            .map(|(_, p)| p)
            .chain([&self.summary_file, &self.report_file])
            .chain(self.svg_files.iter())
    }
}

fn pct(x: f64) -> String {
    format!("{:.2}%", x * 100.0)
}

fn summary_lines(
    preset: &ExperimentPreset,
    result: &SweepResult,
    comparisons: &[Comparison],
) -> Vec<String> {
    let axis = result.spec.swept;
    let mut lines = vec![format!("{}: {}", preset.name, preset.description)];
    for s in &result.series {
        let (Some(first), Some(last)) = (s.points.first(), s.points.last()) else {
            continue;
        };
        let cross = crossing(&fidelity_curve(&s.points), 0.5)
            .map(|x| format!("50% crossing at {axis} = {}", pct(x)))
            .unwrap_or_else(|| "no 50% crossing".into());
        let trials: u64 = s.points.iter().map(|p| p.trials).sum();
        lines.push(format!(
            "{}: F = {:.4} at {}, F = {:.4} at {}; {cross}; {trials} trials",
            s.protocol,
            first.fidelity,
            pct(first.coordinate),
            last.fidelity,
            pct(last.coordinate),
        ));
    }
    lines.extend(comparisons.iter().map(|c| c.to_string()));
    lines
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn axis_label(v: SweptVariable) -> &'static str {
    match v {
        SweptVariable::FInput => "input fidelity",
        SweptVariable::FOperation => "local operation accuracy",
        SweptVariable::FMemory => "memory accuracy",
    }
}

fn render_svgs(
    preset: &ExperimentPreset,
    result: &SweepResult,
    dir: &Path,
) -> Result<Vec<PathBuf>> {
    let x_label = axis_label(result.spec.swept);
    let mut files = vec![];
    match preset.plot {
        PlotKind::Fidelity => {
            let curves: Vec<(String, Vec<(f64, f64)>)> = result
                .series
                .iter()
                .map(|s| (s.protocol.to_string(), fidelity_curve(&s.points)))
                .collect();
            let lines: Vec<svg::Line<'_>> = curves
                .iter()
                .map(|(l, p)| svg::Line {
                    label: l,
                    points: p,
                })
                .collect();
            let path = dir.join(format!("{}.svg", preset.name));
            write_file(
                &path,
                &svg::line_chart(&preset.description, x_label, "output fidelity", &lines),
            )?;
            files.push(path);
        }
        PlotKind::Distribution => {
            let classes: Vec<PauliPair> = PauliPair::all().filter(|c| !c.is_identity()).collect();
            let labels: Vec<String> = classes.iter().map(|c| c.to_string()).collect();
            let label_refs: Vec<&str> = labels.iter().map(String::as_str).collect();
            for s in &result.series {
                let bars: Vec<(f64, Vec<f64>)> = s
                    .points
                    .iter()
                    .map(|p| {
                        let v = classes
                            .iter()
                            .map(|&c| output_class_probability(p, 0, HistogramKind::Raw, c))
                            .collect();
                        (p.coordinate, v)
                    })
                    .collect();
                let path = dir.join(format!("{}_{}.svg", preset.name, s.protocol));
                let title = format!("{} raw error classes on output 0", s.protocol);
                write_file(
                    &path,
                    &svg::stacked_bars(&title, x_label, "probability", &label_refs, &bars),
                )?;
                files.push(path);
            }
        }
    }
    Ok(files)
}

/// Runs a preset or config sweep and writes its artifacts.
pub fn cmd_run(
    opts: &RunOptions,
    progress: impl FnMut(ProtocolId, &DataPoint),
) -> Result<RunReport> {
    let preset = opts.resolve()?;
    let dir = opts.out_dir.clone().unwrap_or_else(default_out_dir);
    std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;

    let started = Instant::now();
    let result = run_sweep_with(&preset.spec, progress)?;
    let wall_time_secs = started.elapsed().as_secs_f64();

    let mut series_files = vec![];
    for s in &result.series {
        let path = dir.join(format!(
            "{}_{}.{}",
            preset.name,
            s.protocol,
            opts.format.extension()
        ));
        let body = match opts.format {
            SeriesFormat::Csv => series_to_csv(&s.points, preset.histograms),
            SeriesFormat::Json => series_to_json(&s.points),
        };
        write_file(&path, &body)?;
        series_files.push((s.protocol, path));
    }
    let svg_files = if opts.svg {
        render_svgs(&preset, &result, &dir)?
    } else {
        vec![]
    };

    let comparisons = compare_references(&preset, &result);
    let summary = summary_lines(&preset, &result, &comparisons);
    let summary_file = dir.join(format!("{}_summary.txt", preset.name));
    write_file(&summary_file, &(summary.join("\n") + "\n"))?;
    let report = RunReport {
        preset: preset.name.clone(),
        seed: preset.spec.seed,
        wall_time_secs,
        series_files,
        summary_file,
        report_file: dir.join(format!("{}_report.json", preset.name)),
        svg_files,
        summary,
        comparisons,
    };
    write_file(&report.report_file, &serde_json::to_string_pretty(&report)?)?;
    Ok(report)
}

/// Table of preset names and descriptions.
pub fn cmd_presets() -> String {
    let mut out = String::new();
    for p in all_presets() {
        let n = p.spec.coordinates().len();
        writeln!(
            out,
            "{:<10} {:>3} points x {} protocols  {}",
            p.name,
            n,
            p.spec.protocols.len(),
            p.description
        )
        .unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stats_table_lists_every_protocol() {
        let t = cmd_stats();
        assert_eq!(t.lines().count(), 6);
        assert!(t.contains("depth reduction 56.5%"));
        let mqnc = t.lines().find(|l| l.starts_with("MQNC ")).unwrap();
        assert!(mqnc.trim_end().ends_with("140"), "{mqnc}");
    }

    #[test]
    fn verify_passes_on_pristine_build() {
        let (text, ok) = cmd_verify(ReportFormat::Text);
        assert!(ok, "{text}");
        let (json, _) = cmd_verify(ReportFormat::Json);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 4);
    }

    #[test]
    fn config_requires_sweep_table() {
        let ok = "name = \"probe\"\n[sweep]\nprotocols = [\"ESP\"]\nswept = \"f_input\"\nstart = 0.9\nstop = 0.9\nstep = 0.01\n";
        let cfg = RunConfig::from_toml_str(ok).unwrap();
        assert_eq!(cfg.name, "probe");
        assert!(RunConfig::from_toml_str("name = \"x\"").is_err());
        assert!(RunConfig::from_toml_str(&ok.replace("probe", "a/b")).is_err());
    }
}
