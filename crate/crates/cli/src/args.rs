use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(
    name = "qwalk",
    version,
    about = "Quantum walks on the line with a two-qubit coin"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evolve one parameter point and write the per-step series.
    Run(WalkArgs),
    /// Evaluate a parameter grid; one row per grid point and recorded step.
    Sweep(WalkArgs),
    /// Write the closed-form limiting density for identical rotation coins.
    Limit(WalkArgs),
    /// Simulation, Fourier evolution and limit side by side.
    Compare(WalkArgs),
    /// Classify grid points, or the built-in table probes with `--suite tables`.
    Classify(WalkArgs),
    /// Sweep restricted to the entropy columns.
    Entropy(WalkArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Self::Csv => "csv",
            Self::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Tables,
}

/// Flags shared by every subcommand. Angle values take a single number, a
/// comma list `a,b,c` or an inclusive range `start:stop:count`.
#[derive(Debug, Clone, Default, Args)]
pub struct WalkArgs {
    /// TOML file with defaults for any of these flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Initial state family: psi1, psi2 or psi3.
    #[arg(long)]
    pub init: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<String>,
    /// Second sub-coin angle; follows `--theta` when omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub xi1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub zeta1: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub xi2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub zeta2: Option<String>,
    /// Step count, or a comma list of recorded steps for sweeps.
    #[arg(long, allow_hyphen_values = true)]
    pub steps: Option<String>,
    /// Momentum grid size for Fourier evolution and the stationary density.
    #[arg(long)]
    pub num_k: Option<usize>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Read angle values as multiples of pi.
    #[arg(long)]
    pub pi_units: bool,
    /// Worker threads for grid evaluation.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Accept angles outside [0, pi/2].
    #[arg(long)]
    pub allow_any_angle: bool,
    /// Also write the full amplitudes of every step (run only).
    #[arg(long)]
    pub record_states: bool,
    /// Half-width of the position window for limit and compare.
    #[arg(long)]
    pub x_max: Option<usize>,
    /// Number of trailing steps averaged by compare.
    #[arg(long)]
    pub avg_window: Option<usize>,
    #[arg(long, value_enum)]
    pub suite: Option<Suite>,
}
