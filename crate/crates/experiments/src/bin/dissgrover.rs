use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use dissgrover_experiments::presets::description;
use dissgrover_experiments::{run_experiment, validate, ExperimentConfig, FigureId, Level};

#[derive(Parser)]
#[command(
    name = "dissgrover",
    version,
    about = "Dissipative Grover search experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Preset figure id (see `list-figures`).
    #[arg(long)]
    figure: Option<String>,
    /// JSON config or run manifest.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write CSV series plus a manifest.
    Run {
        #[command(flatten)]
        source: Source,
        /// Output root; files go to `<out>/<figure_id>/`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Master seed for the control-error streams.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Print predicted rates and parameter warnings without running.
    Validate {
        #[command(flatten)]
        source: Source,
    },
    /// List the preset figure ids.
    ListFigures,
}

fn load(source: &Source) -> anyhow::Result<ExperimentConfig> {
    match (&source.figure, &source.config) {
        (Some(id), None) => Ok(ExperimentConfig::preset(id.parse()?)?),
        (None, Some(path)) => {
            ExperimentConfig::load(path).with_context(|| format!("loading {}", path.display()))
        }
        _ => bail!("give exactly one of --figure or --config"),
    }
}

fn main() -> ExitCode {
    match real_main() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn real_main() -> anyhow::Result<ExitCode> {
    match Cli::parse().command {
        Command::Run { source, out, seed } => {
            let mut config = load(&source)?;
            if let Some(out) = out {
                config.out = out;
            }
            if let Some(seed) = seed {
                config.seed = seed;
            }
            let output = run_experiment(&config)?;
            for d in &output.manifest.diagnostics {
                eprintln!("{d}");
            }
            for f in &output.files {
                println!("{}", f.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate { source } => {
            let config = load(&source)?;
            let diagnostics = validate(&config);
            for d in &diagnostics {
                println!("{d}");
            }
            let failed = diagnostics.iter().any(|d| d.level == Level::Error);
            Ok(if failed {
                ExitCode::FAILURE
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::ListFigures => {
            for id in FigureId::PRESETS {
                println!("{:<6} {}", id.as_str(), description(id));
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
