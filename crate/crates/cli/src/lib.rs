//! The `tpareto` command-line tool.
//!
//! [`run`] parses arguments, dispatches to a subcommand and returns the
//! process exit code: 0 on success (per-threshold failures are reported
//! inline), 2 for usage and validation errors, 3 for I/O errors.

mod commands;
mod config;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

pub use config::ConfigFile;

#[derive(Debug, Parser)]
#[command(name = "tpareto", version, about = "Tail estimation for truncated and non-truncated Pareto-type data")]
pub struct Cli {
    /// TOML file with keys named after the long flags. Flags given on the
    /// command line take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tail index and truncation odds for each threshold k.
    Fit(EstimateArgs),
    /// Extreme quantile estimates: truncated, Weissman and moment.
    Quantile(QuantileArgs),
    /// Right endpoint estimates: truncated and moment.
    Endpoint(EstimateArgs),
    /// Pareto and truncated Pareto QQ-plot data and the choice of k*.
    Qqplot(QqplotArgs),
    /// Monte Carlo study on a simulated family.
    Simulate(SimulateArgs),
    /// Asymptotic bias and variance constants.
    Asymptotics(AsymptoticsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Pareto,
    Burr,
    TruncatedPareto,
    TruncatedBurr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Curve {
    Sigma2,
    Beta,
    /// Both trimming curves over a grid in [0, 1/4].
    Fig7,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Case {
    A,
    B,
    C,
}

#[derive(Debug, Clone, Args)]
pub struct DataArgs {
    /// CSV file with one positive observation per row.
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Column to read when the file has a header and several columns.
    #[arg(long)]
    pub column: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Number of trimmed top observations [default: 1].
    #[arg(long)]
    pub r: Option<usize>,
    /// Threshold index; repeat for several. Defaults to every k in (r, n).
    #[arg(long)]
    pub k: Vec<usize>,
    /// Inclusive range `start:end` or `start:end:step`.
    #[arg(long, value_name = "RANGE")]
    pub k_range: Option<String>,
    /// Use the raw odds estimate instead of its non-negative part.
    #[arg(long)]
    pub raw_odds: bool,
}

#[derive(Debug, Clone, Args)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long, value_enum)]
    pub output: Option<Format>,
}

#[derive(Debug, Clone, Args)]
pub struct QuantileArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Exceedance probability of the quantile.
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long, value_enum)]
    pub output: Option<Format>,
}

#[derive(Debug, Clone, Args)]
pub struct QqplotArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Trimming used when fitting each candidate k [default: 1].
    #[arg(long)]
    pub r: Option<usize>,
    /// Evaluate every stride-th candidate k [default: 1].
    #[arg(long)]
    pub stride: Option<usize>,
    /// Directory receiving pa_qqplot.csv, tpa_qqplot.csv and kstar_sweep.csv [default: .].
    #[arg(long, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub output: Option<Format>,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub family: Option<Family>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Burr second-order parameter (negative).
    #[arg(long, allow_hyphen_values = true)]
    pub rho: Option<f64>,
    /// Truncation point of the truncated families.
    #[arg(long = "T", visible_alias = "upper", value_name = "T")]
    pub upper: Option<f64>,
    /// Sample size [default: 1000].
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of Monte Carlo runs [default: 1000].
    #[arg(long)]
    pub runs: Option<usize>,
    /// Trimming index; repeat for several [default: 1 and 10].
    #[arg(long)]
    pub r: Vec<usize>,
    /// Threshold index; repeat for several. Defaults to multiples of n/100.
    #[arg(long)]
    pub k: Vec<usize>,
    #[arg(long, value_name = "RANGE")]
    pub k_range: Option<String>,
    /// [default: 0.001]
    #[arg(long)]
    pub p: Option<f64>,
    /// [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; 0 uses all cores.
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub raw_odds: bool,
    /// [default: csv]
    #[arg(long, value_enum)]
    pub output: Option<Format>,
}

#[derive(Debug, Clone, Args)]
pub struct AsymptoticsArgs {
    /// Trimming curve to evaluate.
    #[arg(long, value_enum, conflicts_with = "case")]
    pub curve: Option<Curve>,
    /// Regime of the constants: a, b (needs --kappa) or c.
    #[arg(long, value_enum)]
    pub case: Option<Case>,
    /// Limit of r/k.
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Second-order index (negative).
    #[arg(long, allow_hyphen_values = true)]
    pub rho_star: Option<f64>,
    /// Limit of k/(n D_T) in regime b.
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Grid spacing for the trimming-curve table [default: 0.005].
    #[arg(long)]
    pub grid_step: Option<f64>,
    #[arg(long, value_enum)]
    pub output: Option<Format>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{context}: {source}")]
    Io { context: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Input { path: String, source: tpareto::Error },
    #[error(transparent)]
    Core(#[from] tpareto::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io { .. } => 3,
            CliError::Input { source, .. } | CliError::Core(source) => match source {
                tpareto::Error::Io(_) => 3,
                _ => 2,
            },
        }
    }
}

/// Runs the tool on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(text.as_bytes());
            return e.exit_code();
        }
    };
    match commands::execute(cli, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
