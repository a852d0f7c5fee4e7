//! Batch front end: JSON config in, JSON report (and optional CSV) out.
//!
//! ```text
//! analytic-content <command> [config.json] [--out file] [--csv file] [--seed N]
//!                  [--samples N] [--degree N] [--tolerance X] ...
//! ```
//!
//! Exit status: 0 on success, 2 on a config or validation error, 3 when the
//! solver did not converge (the report is still written), 1 on I/O failure.

mod commands;
pub mod config;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use serde::Serialize;
use serde_json::Value;

pub use config::{ConfigError, RunConfig};

/// Bumped whenever a report field changes meaning or disappears.
pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_UNCONVERGED: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Analytic content of the configured domain.
    Content,
    /// Isoperimetric bounds 2A/P and √(A/π).
    Bounds,
    /// Content plus extremality verdict.
    Classify,
    /// Content of Ω and aΩ + b, and the minimizer transformation law.
    Covariance,
    /// ODE, modulus, monodromy and identity checks for an annulus.
    VerifyConnection,
    /// The quantized annuli R1 = nλ, R2 = (n − 1)λ.
    Quantize,
    /// Content across a family of annuli with fixed R1.
    Sweep,
}

#[derive(Debug, Parser)]
#[command(name = "analytic-content", version, about = "Analytic content of planar domains")]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,
    /// JSON run configuration.
    pub config: Option<PathBuf>,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write plottable rows (boundary residuals, sweep or quantize table) as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Seed for the random interior test points.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Samples per boundary component (overrides solver.samples).
    #[arg(long)]
    pub samples: Option<usize>,
    /// Polynomial degree (overrides solver.poly_degree).
    #[arg(long)]
    pub degree: Option<usize>,
    /// Pole degree per hole (overrides solver.pole_degree).
    #[arg(long)]
    pub pole_degree: Option<usize>,
    /// Lawson stopping tolerance (overrides solver.tolerance).
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Relative extremality band for `classify`.
    #[arg(long)]
    pub extremal_tolerance: Option<f64>,
    /// λ for `quantize`.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Largest n for `quantize`.
    #[arg(long)]
    pub n_max: Option<u32>,
    /// Outer radius for `verify-connection`.
    #[arg(long)]
    pub r1: Option<f64>,
    /// Inner radius for `verify-connection`.
    #[arg(long)]
    pub r2: Option<f64>,
}

/// Everything a run produces, before it is written anywhere.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub report: Value,
    pub csv: Option<String>,
    pub exit_code: i32,
}

#[derive(Debug)]
pub enum CliError {
    Config(ConfigError),
    Validation(String),
    Runtime(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(e) => write!(f, "{e}"),
            CliError::Validation(m) => write!(f, "validation error: {m}"),
            CliError::Runtime(m) => write!(f, "error: {m}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Runtime(_) => EXIT_IO,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e)
    }
}

/// Loads the config (if any) and applies command-line overrides.
pub fn effective_config(args: &Args) -> Result<RunConfig, CliError> {
    let mut config = match &args.config {
        Some(path) => RunConfig::from_path(path)?,
        None => RunConfig::default(),
    };
    if let Some(v) = args.samples {
        config.solver.samples = v;
    }
    if let Some(v) = args.degree {
        config.solver.poly_degree = v;
    }
    if let Some(v) = args.pole_degree {
        config.solver.pole_degree = v;
    }
    if let Some(v) = args.tolerance {
        config.solver.tolerance = v;
    }
    if let Some(v) = args.seed {
        config.seed = Some(v);
    }
    if let Some(v) = args.extremal_tolerance {
        config.classify = Some(config::ClassifyConfig { tolerance: v });
    }
    if args.lambda.is_some() || args.n_max.is_some() {
        let base = config.quantize.unwrap_or(config::QuantizeConfig { lambda: 1.0, n_max: 10 });
        config.quantize = Some(config::QuantizeConfig {
            lambda: args.lambda.unwrap_or(base.lambda),
            n_max: args.n_max.unwrap_or(base.n_max),
        });
    }
    if args.r1.is_some() || args.r2.is_some() {
        let base = config.connection;
        let (r1, r2) = match (args.r1.or(base.map(|c| c.r1)), args.r2.or(base.map(|c| c.r2))) {
            (Some(r1), Some(r2)) => (r1, r2),
            _ => return Err(CliError::Validation("--r1 and --r2 must be given together".into())),
        };
        config.connection = Some(config::ConnectionConfig {
            r1,
            r2,
            points: base.map_or(1000, |c| c.points),
        });
    }
    config.validate()?;
    Ok(config)
}

/// Runs one command without touching the filesystem beyond reading config.
pub fn execute(command: Command, config: &RunConfig) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let output = commands::dispatch(command, config)?;
    let elapsed = start.elapsed();
    let report = serde_json::json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": config,
        "results": output.results,
        "timings": { "elapsed_seconds": elapsed.as_secs_f64() },
    });
    Ok(Outcome {
        report,
        csv: output.csv,
        exit_code: if output.converged { EXIT_OK } else { EXIT_UNCONVERGED },
    })
}

/// Entry point for the binary; returns the process exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(args) => args,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
        }
    };
    let outcome = effective_config(&args).and_then(|config| execute(args.command, &config));
    let outcome = match outcome {
        Ok(o) => o,
        Err(e) => {
            eprintln!("{e}");
            return e.exit_code();
        }
    };
    let text = serde_json::to_string_pretty(&outcome.report).expect("report serializes") + "\n";
    let written = match &args.out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: writing report: {e}");
        return EXIT_IO;
    }
    if let (Some(path), Some(csv)) = (&args.csv, &outcome.csv) {
        if let Err(e) = std::fs::write(path, csv) {
            eprintln!("error: writing {}: {e}", path.display());
            return EXIT_IO;
        }
    }
    outcome.exit_code
}
