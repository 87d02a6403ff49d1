use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

/// Fit superposed perturbed-line S-curves (a y^3 + y = m x) to empirical
/// CDFs and analytic targets, and report their peak-slope measures.
#[derive(Debug, Parser)]
#[command(name = "scurve", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit the ECDF of every selected (attribute, species) column.
    FitCdf(FitCdfArgs),
    /// Fit a sampled sigmoid or normal CDF.
    FitTarget(TargetArgs),
    /// Fit a target for a range of n and tabulate a, m and NL against n.
    Sweep(TargetArgs),
    /// Merge earlier runs into comparison tables and an NL-vs-n plot.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Emit {
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    /// 1 / (1 + e^-x)
    Sigmoid,
    /// Standard normal CDF, (1 + erf(x / sqrt 2)) / 2.
    Erf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyArg {
    /// Midpoints of the steepest table segments.
    Slope,
    /// Most frequent sample values (ECDF input only).
    Mode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitModeArg {
    Constant,
    Slope,
}

/// Optimizer start and limits shared by all fitting commands.
#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    /// Component counts to fit, e.g. `1,3`.
    #[arg(long, value_delimiter = ',', conflicts_with = "sweep")]
    pub n: Vec<usize>,
    /// Inclusive range of component counts, e.g. `1:8`.
    #[arg(long, value_name = "LO:HI")]
    pub sweep: Option<String>,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub init_a: f64,
    /// One slope for all components or one per component.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub init_m: Vec<f64>,
    /// One weight for all components or one per component.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub init_p: Vec<f64>,
    #[arg(long, value_enum, default_value = "constant")]
    pub init_mode: InitModeArg,
    /// Lower bound on the perturbation parameter a.
    #[arg(long, default_value_t = scurve::A_LOWER_BOUND)]
    pub a_bound: f64,
    #[arg(long, default_value_t = 1000)]
    pub max_iterations: usize,
    /// Output directory (created if missing).
    #[arg(long, default_value = "scurve-out")]
    pub out: PathBuf,
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_value = "json,csv,svg"
    )]
    pub emit: Vec<Emit>,
}

#[derive(Debug, Clone, Args)]
pub struct FitCdfArgs {
    /// Measurement CSV: numeric columns then a class label. A header row
    /// names the columns; without one the iris layout is assumed. Defaults
    /// to the bundled iris data.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Attributes to fit (default: all).
    #[arg(long, value_delimiter = ',')]
    pub attribute: Vec<String>,
    /// Species / class labels to fit (default: all).
    #[arg(long, value_delimiter = ',')]
    pub species: Vec<String>,
    #[arg(long, value_enum, default_value = "mode")]
    pub strategy: StrategyArg,
    /// Add a zero-frequency point to the ECDF at X (repeatable).
    #[arg(long, value_name = "X", allow_negative_numbers = true)]
    pub inject_zero_point: Vec<f64>,
    #[command(flatten)]
    pub fit: FitArgs,
}

#[derive(Debug, Clone, Args)]
pub struct TargetArgs {
    #[arg(long, value_enum)]
    pub target: Target,
    /// Sampling interval (repeatable), e.g. `-3:3`.
    #[arg(
        long,
        value_name = "LO:HI",
        allow_hyphen_values = true,
        default_value = "-3:3"
    )]
    pub interval: Vec<String>,
    /// Number of equally spaced samples.
    #[arg(long, default_value_t = scurve::data::DEFAULT_TARGET_POINTS)]
    pub points: usize,
    #[command(flatten)]
    pub fit: FitArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ReportArgs {
    /// Run directories holding `fit_report.json` (searched recursively).
    #[arg(long, required = true)]
    pub input: Vec<PathBuf>,
    #[arg(long, default_value = "scurve-report")]
    pub out: PathBuf,
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_value = "json,csv,svg"
    )]
    pub emit: Vec<Emit>,
}

/// Parses `LO:HI`.
pub fn parse_pair<T: std::str::FromStr>(s: &str) -> Option<(T, T)> {
    let (lo, hi) = s.split_once(':')?;
    Some((lo.trim().parse().ok()?, hi.trim().parse().ok()?))
}
