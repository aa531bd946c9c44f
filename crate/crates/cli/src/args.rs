use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use anchornn::{Family, LaplacianKind};

use crate::report::Method;

#[derive(Debug, Parser)]
#[command(
    name = "anchornn",
    version,
    about = "Spectral and AnchorNN clustering with experiment tooling"
)]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic dataset with ground-truth labels.
    Generate(GenerateArgs),
    /// Cluster a dataset once and write labels plus a report.
    Cluster(ClusterArgs),
    /// Run a grid of configurations over many seeds.
    Sweep(SweepArgs),
    /// Check separation, covering and connectivity on a labelled dataset.
    Diag(DiagArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub family: Family,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Minimum distance between points of different clusters.
    #[arg(long = "delta-min")]
    pub delta_min: Option<f64>,
    /// Shape parameter override, e.g. `--param gap=3.2`.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    pub params: Vec<String>,
    #[arg(long)]
    pub out: PathBuf,
}

/// Options shared by `cluster` and `sweep`.
#[derive(Debug, Args)]
pub struct MethodArgs {
    #[arg(long, value_enum)]
    pub method: Method,
    /// Number of clusters.
    #[arg(short = 'k', long = "k")]
    pub clusters: usize,
    #[arg(long, default_value = "unnorm")]
    pub kind: LaplacianKind,
    /// Constant C of the default neighbor count `ceil(C ln s)`.
    #[arg(long = "c", default_value_t = 2.0)]
    pub scaling_c: f64,
    #[arg(long = "eigen-tol", default_value_t = 1e-8)]
    pub eigen_tol: f64,
    /// Matrix-vector budget of the eigensolver (default: 10 times the size).
    #[arg(long = "eigen-max-matvecs")]
    pub eigen_max_matvecs: Option<usize>,
    #[arg(long, default_value_t = 10)]
    pub restarts: usize,
    /// Skip the separation, covering and connectivity checks in the report.
    #[arg(long = "no-diagnostics")]
    pub no_diagnostics: bool,
}

#[derive(Debug, Args)]
pub struct ClusterArgs {
    pub input: PathBuf,
    /// The last column of the input holds ground-truth labels.
    #[arg(long = "has-labels")]
    pub has_labels: bool,
    #[command(flatten)]
    pub method: MethodArgs,
    /// Neighbor count (default: `ceil(C ln s)` for the clustered sample size s).
    #[arg(long = "K")]
    pub neighbors: Option<usize>,
    /// Anchor count (AnchorNN).
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Labels CSV to write (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON report to write (default: stderr).
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Labelled input CSV.
    pub input: PathBuf,
    #[command(flatten)]
    pub method: MethodArgs,
    #[arg(long = "grid-K", value_delimiter = ',', required = true)]
    pub grid_neighbors: Vec<usize>,
    #[arg(long = "grid-m", value_delimiter = ',')]
    pub grid_m: Vec<usize>,
    #[arg(long, default_value_t = 20)]
    pub seeds: usize,
    /// First seed; replicate i uses seed + i.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Directory for `reports.json` and `summary.csv`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct DiagArgs {
    /// Labelled input CSV.
    pub input: PathBuf,
    /// Neighbor count (default: `ceil(C ln m)`).
    #[arg(long = "K")]
    pub neighbors: Option<usize>,
    #[arg(long)]
    pub m: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long = "c", default_value_t = 2.0)]
    pub scaling_c: f64,
    /// JSON output (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}
