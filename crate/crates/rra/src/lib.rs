//! Command-line front end for the rate allocation core: solve a cell, replay
//! churn and usage schedules, and tabulate signalling overhead.
//!
//! Every command computes all of its outputs in memory first and only then
//! writes them, each file through a temporary name in the output directory,
//! so a failed run leaves nothing behind.

pub mod commands;
pub mod config;
pub mod output;
pub mod presets;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use commands::{run, Outcome};
use config::{ArchName, BetaLocationName, PolicyName};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] rra_core::Error),
    #[error("{context}: {source}")]
    Io { context: String, source: std::io::Error },
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Usage(_) => "usage",
            CliError::Core(_) => "solver",
            CliError::Io { .. } => "io",
        }
    }

    /// Machine-readable form printed on stderr.
    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": { "kind": self.kind(), "message": self.to_string() } }).to_string()
    }
}

#[derive(Debug, Parser)]
#[command(name = "rra", version, about = "Utility-proportional-fair rate allocation experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the cell centrally; write per-application rates and a KKT certificate.
    Allocate(CommonArgs),
    /// Run a slotted schedule; write the per-slot time series, message trace and window summary.
    Simulate(CommonArgs),
    /// Compare closed-form minimum message counts with counted ones over a delta grid.
    Overhead(CommonArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// TOML configuration file.
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    pub config: Option<PathBuf>,
    /// Built-in configuration: fresh-start, usage-sweep, churn-5-to-6, churn-6-to-4, usage-change-two, overhead-grid.
    #[arg(long)]
    pub preset: Option<String>,
    /// Output directory, created if missing.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Bid-change termination threshold; for `overhead`, replaces the delta grid.
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long, value_enum)]
    pub policy: Option<PolicyName>,
    #[arg(long, value_enum)]
    pub arch: Option<ArchName>,
    #[arg(long, value_enum)]
    pub beta_location: Option<BetaLocationName>,
    /// Accepted for scripts; every run is deterministic and uses no random numbers.
    #[arg(long)]
    pub seedless: bool,
}
