//! `vg` — subgroup identification from randomized-trial data.
//!
//! Subcommands: `simulate` (generate scenario datasets), `compare`
//! (Monte Carlo sweep of Type I error / power / conditional TDR),
//! `analyze` (fit a method on a CSV, optionally calibrate, transfer a
//! signature to a second dataset, and bootstrap), `calibrate`
//! (permutation calibration alone), and `bootstrap` (signature-conditioned
//! confidence intervals alone).
//!
//! Exit codes: 0 success (including a clean "no subgroup identified"),
//! 1 usage error, 2 data error, 3 internal error.

mod commands;
mod outdir;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "vg", version, about = "Subgroup identification toolkit")]
pub struct Cli {
    /// Master random seed; every output is a pure function of it.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Worker thread cap (0 = one per core). Results do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    /// Output directory for this run.
    #[arg(long, global = true, default_value = "vg-run")]
    pub out: PathBuf,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a scenario dataset: CSV, sidecar schema, and truth labels.
    Simulate(SimulateArgs),
    /// Sweep identification thresholds and compare methods at matched Type I
    /// error.
    Compare(CompareArgs),
    /// Fit a method on a CSV dataset, with optional calibration, signature
    /// transfer, and bootstrap intervals.
    Analyze(AnalyzeArgs),
    /// Permutation-calibrate the split-significance threshold.
    Calibrate(CalibrateArgs),
    /// Signature-conditioned bootstrap confidence intervals.
    Bootstrap(BootstrapArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Preset name (no-prognostic, no-prognostic-mix, mix-prognostic) or a
    /// path to a scenario JSON file.
    #[arg(long)]
    pub scenario: String,

    /// Override the scenario sample size.
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Comma-separated scenario presets or JSON paths.
    #[arg(long, value_delimiter = ',', required = true)]
    pub scenarios: Vec<String>,

    /// Comma-separated methods to compare.
    #[arg(long, value_delimiter = ',', default_value = "vg,vt,gi")]
    pub methods: Vec<String>,

    /// Monte Carlo iterations per scenario.
    #[arg(long, default_value_t = 500)]
    pub iterations: usize,

    /// Number of log-spaced threshold-grid points.
    #[arg(long, default_value_t = 50)]
    pub theta_grid: usize,

    /// Trees in the counterfactual forest.
    #[arg(long, default_value_t = 500)]
    pub trees: usize,

    /// Minimum node size of the partitioning step.
    #[arg(long, default_value_t = 20)]
    pub min_node: usize,

    /// Maximum tree depth of the partitioning step.
    #[arg(long, default_value_t = 3)]
    pub max_depth: usize,

    /// Type I error levels for the matched comparison table.
    #[arg(long, value_delimiter = ',', default_value = "0.05,0.1,0.2,0.4")]
    pub match_levels: Vec<f64>,

    /// Univariate selection test for the unbiased policy: curvature or
    /// slope-t.
    #[arg(long, default_value = "curvature")]
    pub selection: String,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Input CSV file.
    #[arg(long)]
    pub data: PathBuf,

    /// Sidecar schema JSON (column roles and kinds).
    #[arg(long)]
    pub schema: PathBuf,

    /// Method to fit: vg, vt, or gi.
    #[arg(long, default_value = "vg")]
    pub method: String,

    /// Calibrate the threshold by permutation: target level and permutation
    /// count (e.g. `--calibrate 0.05 500`).
    #[arg(long, num_args = 2, value_names = ["LEVEL", "NPERM"])]
    pub calibrate: Option<Vec<f64>>,

    /// Skip calibration and fit exploratorily at --theta (Type I error is
    /// then uncontrolled).
    #[arg(long)]
    pub no_calibration: bool,

    /// Split-significance threshold used when not calibrating.
    #[arg(long, default_value_t = 0.05)]
    pub theta: f64,

    /// Apply the identified signature to a second CSV (same schema) and
    /// report the effect-transfer table.
    #[arg(long)]
    pub transfer: Option<PathBuf>,

    /// Bootstrap replicate count for confidence intervals.
    #[arg(long)]
    pub bootstrap: Option<usize>,

    /// Confidence level for bootstrap intervals.
    #[arg(long, default_value_t = 0.95)]
    pub level: f64,

    /// Counterfactual backend for the fit: forest or single-tree.
    #[arg(long, default_value = "forest")]
    pub backend: String,

    /// Counterfactual backend inside the bootstrap loop.
    #[arg(long, default_value = "single-tree")]
    pub bootstrap_backend: String,

    /// Trees in the counterfactual forest.
    #[arg(long, default_value_t = 500)]
    pub trees: usize,

    #[arg(long, default_value_t = 20)]
    pub min_node: usize,

    #[arg(long, default_value_t = 3)]
    pub max_depth: usize,

    /// Univariate selection test for the unbiased policy: curvature or
    /// slope-t.
    #[arg(long, default_value = "curvature")]
    pub selection: String,
}

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    #[arg(long)]
    pub data: PathBuf,

    #[arg(long)]
    pub schema: PathBuf,

    #[arg(long, default_value = "vg")]
    pub method: String,

    /// Target Type I error level.
    #[arg(long, default_value_t = 0.05)]
    pub target: f64,

    /// Number of treatment permutations.
    #[arg(long, default_value_t = 500)]
    pub n_perm: usize,

    #[arg(long, default_value = "forest")]
    pub backend: String,

    #[arg(long, default_value_t = 500)]
    pub trees: usize,

    #[arg(long, default_value_t = 20)]
    pub min_node: usize,

    #[arg(long, default_value_t = 3)]
    pub max_depth: usize,

    /// Univariate selection test for the unbiased policy: curvature or
    /// slope-t.
    #[arg(long, default_value = "curvature")]
    pub selection: String,
}

#[derive(Debug, Args)]
pub struct BootstrapArgs {
    #[arg(long)]
    pub data: PathBuf,

    #[arg(long)]
    pub schema: PathBuf,

    /// Signature JSON describing the subgroup to condition on.
    #[arg(long)]
    pub signature: PathBuf,

    /// Bootstrap replicate count.
    #[arg(long, default_value_t = 500)]
    pub b: usize,

    #[arg(long, default_value_t = 0.95)]
    pub level: f64,

    #[arg(long, default_value = "single-tree")]
    pub backend: String,

    #[arg(long, default_value_t = 500)]
    pub trees: usize,
}

/// Errors mapped to documented exit codes.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Internal(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Internal(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Internal(m) => m,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Internal(format!("i/o error: {e}"))
    }
}

impl From<vg_core::DataError> for CliError {
    fn from(e: vg_core::DataError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<vg_core::methods::MethodError> for CliError {
    fn from(e: vg_core::methods::MethodError) -> Self {
        CliError::Internal(e.to_string())
    }
}

impl From<vg_core::resample::ResampleError> for CliError {
    fn from(e: vg_core::resample::ResampleError) -> Self {
        match e {
            vg_core::resample::ResampleError::Invalid(m) => CliError::Usage(m),
            vg_core::resample::ResampleError::Data(d) => CliError::Data(d.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests are successes, everything else is usage
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    if cli.threads > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
        {
            eprintln!("error: could not configure thread pool: {e}");
            return ExitCode::from(3);
        }
    }

    let result = match &cli.command {
        Command::Simulate(args) => commands::simulate(&cli, args),
        Command::Compare(args) => commands::compare(&cli, args),
        Command::Analyze(args) => commands::analyze(&cli, args),
        Command::Calibrate(args) => commands::calibrate(&cli, args),
        Command::Bootstrap(args) => commands::bootstrap(&cli, args),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
