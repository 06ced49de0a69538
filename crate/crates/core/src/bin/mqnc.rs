//! `mqnc stats | verify | run | presets`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mqnc::circuit::ProtocolId;
use mqnc::cli::{self, ReportFormat, RunOptions, RunSource, SeriesFormat};

#[derive(Parser)]
#[command(
    name = "mqnc",
    version,
    about = "Pauli-frame simulator for network-coded entanglement distribution"
)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the resource table of the four protocols.
    Stats,
    /// Check every protocol against the stabilizer tableau.
    Verify {
        #[arg(long)]
        json: bool,
    },
    /// List the built-in experiment presets.
    Presets,
    /// Run a preset or a TOML sweep config.
    Run {
        /// Preset name, e.g. fig10.
        #[arg(required_unless_present = "config", conflicts_with = "config")]
        preset: Option<String>,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        max_trials: Option<u64>,
        #[arg(long)]
        max_errors: Option<u64>,
        /// Comma-separated subset, e.g. MQNC,ESP.
        #[arg(long, value_delimiter = ',')]
        protocols: Option<Vec<ProtocolId>>,
        /// Defaults to $MQNC_OUT_DIR, else ./mqnc-out.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "csv")]
        format: SeriesFormat,
        #[arg(long)]
        svg: bool,
        #[arg(long, short)]
        quiet: bool,
    },
}

fn main() -> ExitCode {
    match Args::parse().command {
        Command::Stats => print!("{}", cli::cmd_stats()),
        Command::Presets => print!("{}", cli::cmd_presets()),
        Command::Verify { json } => {
            let (text, ok) = cli::cmd_verify(if json {
                ReportFormat::Json
            } else {
                ReportFormat::Text
            });
            print!("{text}");
            if !ok {
                return ExitCode::FAILURE;
            }
        }
        Command::Run {
            preset,
            config,
            seed,
            max_trials,
            max_errors,
            protocols,
            out,
            format,
            svg,
            quiet,
        } => {
            let source = match (preset, config) {
                (_, Some(path)) => RunSource::Config(path),
                (Some(name), None) => RunSource::Preset(name),
                (None, None) => unreachable!("clap requires one"),
            };
            let opts = RunOptions {
                source,
                seed,
                max_trials,
                max_errors,
                protocols,
                out_dir: out,
                format,
                svg,
            };
            let progress = |p: ProtocolId, d: &mqnc::engine::DataPoint| {
                if !quiet {
                    eprintln!(
                        "{p:>4} {:.4}  F = {:.4}  ({} trials)",
                        d.coordinate, d.fidelity, d.trials
                    );
                }
            };
            match cli::cmd_run(&opts, progress) {
                Ok(report) => {
                    for line in &report.summary {
                        println!("{line}");
                    }
                    for f in report.files() {
                        println!("wrote {}", f.display());
                    }
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::FAILURE;
                }
            }
        }
    }
    ExitCode::SUCCESS
}
