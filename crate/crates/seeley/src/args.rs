use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::FunctionSpec;

#[derive(Debug, Parser)]
#[command(name = "seeley", version, about = "Evaluate and verify C^k extension operators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the extension coefficients for smoothness k.
    Coeffs(CoeffsArgs),
    /// Print the jet of the smooth step from lo to hi.
    Cutoff(CutoffArgs),
    /// Extend a function of (t, x) across t = b.
    Extend1d(ExtendArgs),
    /// Extend a function on a corner, one axis at a time.
    ExtendQuadrant(QuadrantArgs),
    /// Extend a function on the unit ball radially.
    ExtendBall(BallArgs),
    /// Extend a function on the unit disk through polar coordinates.
    ExtendDisk(DiskArgs),
    /// Run a verification suite and print its JSON report.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct CoeffsArgs {
    #[arg(long)]
    pub k: usize,
    /// Write `<path>` (CSV) and the matching `.json` metadata.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CutoffArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub lo: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub hi: f64,
    #[arg(long, default_value_t = 0)]
    pub order: usize,
    /// Comma-separated abscissae, or a grid `start:end:n`.
    #[arg(long, allow_hyphen_values = true)]
    pub at: String,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Operator parameters; each overrides the `[operator]` table of the config.
#[derive(Debug, Default, Clone, Args)]
pub struct OperatorArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub tau: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub upsilon: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub kappa: Option<f64>,
    #[arg(long = "kappa-prime", allow_negative_numbers = true)]
    pub kappa_prime: Option<f64>,
    #[arg(long)]
    pub k: Option<usize>,
}

/// Flags shared by the grid-evaluating subcommands.
#[derive(Debug, Default, Clone, Args)]
pub struct CommonArgs {
    /// TOML or JSON run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// `start:end:n`.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Jets of orders `1..=ell` are written next to the values.
    #[arg(long)]
    pub ell: Option<usize>,
    /// Tangent for the jets, comma-separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub direction: Option<Vec<f64>>,
    /// `exp`, `exp-cos`, `disk-sample`, `radial-square`, `constant:<v>`,
    /// `monomial:<p>` or an inline JSON object.
    #[arg(long)]
    pub function: Option<FunctionSpec>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ExtendArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub operator: OperatorArgs,
    /// Space coordinates, comma-separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub x: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct QuadrantArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub operator: OperatorArgs,
    /// Number of corner axes.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub x: Option<Vec<f64>>,
}

#[derive(Debug, Default, Clone, Args)]
pub struct RadialArgs {
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long = "tau-hat", allow_negative_numbers = true)]
    pub tau_hat: Option<f64>,
    #[arg(long = "upsilon-hat", allow_negative_numbers = true)]
    pub upsilon_hat: Option<f64>,
}

#[derive(Debug, Args)]
pub struct BallArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub radial: RadialArgs,
    #[arg(long)]
    pub dim: Option<usize>,
}

#[derive(Debug, Args)]
pub struct DiskArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub radial: RadialArgs,
    /// Radius of the center patch.
    #[arg(long)]
    pub r0: Option<f64>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// A suite name, or `all`.
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub config: Option<std::path::PathBuf>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}
