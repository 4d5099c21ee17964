//! Command-line front end: `verify`, `optimize` and `sweep`.
//!
//! Exit codes: 0 on success, 1 on I/O or internal failure, 2 for malformed
//! arguments or configuration, 3 when a report shows a bound violated beyond
//! tolerance (the report is still written).

pub mod commands;
pub mod config;
pub mod report;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use commands::{cmd_optimize, cmd_sweep, cmd_verify, VerifySettings};
pub use config::{ConfigurationSpec, DirectionSpec, RunConfig};
pub use report::{BoundReport, InputsEcho, OptimizeDocument, Quantity, SweepRow, VerifyDocument};

pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_SAMPLES: u64 = 10_000;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Compute(#[from] crate::Error),
    #[error("serialization failed: {0}")]
    Serialize(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Compute(crate::Error::InvalidArgument(_)) => EXIT_CONFIG,
            _ => EXIT_FAILURE,
        }
    }
}

/// One computational track.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Track {
    Classical,
    Quantum,
    Ga,
}

impl Track {
    pub fn name(self) -> &'static str {
        match self {
            Track::Classical => "classical",
            Track::Quantum => "quantum",
            Track::Ga => "ga",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum TrackSelection {
    Classical,
    Quantum,
    Ga,
    All,
}

impl TrackSelection {
    pub fn tracks(self) -> Vec<Track> {
        match self {
            TrackSelection::Classical => vec![Track::Classical],
            TrackSelection::Quantum => vec![Track::Quantum],
            TrackSelection::Ga => vec![Track::Ga],
            TrackSelection::All => vec![Track::Classical, Track::Quantum, Track::Ga],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "bellcheck", version, about = "Verify classical, quantum and geometric-algebra CHSH bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the selected track(s) at a configuration and report against their bounds.
    Verify(VerifyArgs),
    /// Maximize a track's CHSH expression.
    Optimize(OptimizeArgs),
    /// Tabulate the singlet CHSH value along a coplanar family of settings.
    Sweep(SweepArgs),
}

#[derive(Debug, clap::Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub track: Option<TrackSelection>,
    /// TOML run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Use the canonical maximizing configuration.
    #[arg(long)]
    pub canonical: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Monte Carlo samples for the classical track.
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    /// Print the inequality or identity each report checks.
    #[arg(long)]
    pub paper: bool,
}

#[derive(Debug, clap::Args)]
pub struct OptimizeArgs {
    #[arg(long, value_enum)]
    pub track: Track,
    #[arg(long, default_value_t = crate::optimizer::DEFAULT_RESTARTS)]
    pub restarts: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub steps: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
}

/// Writes `text` to `path`, or to stdout when no path is given.
pub fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|source| CliError::Io {
                path: PathBuf::from("<stdout>"),
                source,
            })
        }
    }
}

fn run_verify(args: VerifyArgs) -> Result<i32, CliError> {
    let file = match &args.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let settings = VerifySettings::resolve(&args, file)?;
    let doc = cmd_verify(&settings)?;
    let text = match settings.format {
        OutputFormat::Json => report::to_json(&doc).map_err(|e| CliError::Serialize(e.to_string()))?,
        OutputFormat::Csv => report::verify_csv(&doc).map_err(|e| CliError::Serialize(e.to_string()))?,
    };
    emit(&text, settings.output_path.as_deref())?;
    if args.paper {
        for r in &doc.reports {
            eprintln!("{} [{}]: {}", r.quantity.name(), r.track.name(), r.quantity.relation());
        }
    }
    Ok(if doc.reports.iter().any(BoundReport::violated) {
        EXIT_VIOLATION
    } else {
        EXIT_OK
    })
}

fn run_optimize(args: OptimizeArgs) -> Result<i32, CliError> {
    let doc = cmd_optimize(args.track, args.restarts, args.seed)?;
    let text = report::to_json(&doc).map_err(|e| CliError::Serialize(e.to_string()))?;
    emit(&text, args.out.as_deref())?;
    Ok(if doc.violated() { EXIT_VIOLATION } else { EXIT_OK })
}

fn run_sweep(args: SweepArgs) -> Result<i32, CliError> {
    let rows = cmd_sweep(args.steps)?;
    let text = match args.format {
        OutputFormat::Csv => report::sweep_csv(&rows).map_err(|e| CliError::Serialize(e.to_string()))?,
        OutputFormat::Json => report::to_json(&rows).map_err(|e| CliError::Serialize(e.to_string()))?,
    };
    emit(&text, args.out.as_deref())?;
    let violated = rows.iter().any(|r| r.qm_value > r.tsirelson_bound + report::VIOLATION_TOL);
    Ok(if violated { EXIT_VIOLATION } else { EXIT_OK })
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let outcome = match cli.command {
        Command::Verify(a) => run_verify(a),
        Command::Optimize(a) => run_optimize(a),
        Command::Sweep(a) => run_sweep(a),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
