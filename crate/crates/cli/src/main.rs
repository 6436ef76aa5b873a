//! `thermoq` — QFI trajectories and sweeps for qubit thermometry.
//!
//! Subcommands: `markov` and `nonmarkov` write per-sample CSV trajectories,
//! `theorem-scan` verifies the cold-probe enhancement criterion over a
//! parameter grid and emits a JSON report, `fig2` runs the paired hot/cold
//! non-Markovian comparison (CSV per pair plus a JSON summary).
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parameter
//! error, 3 I/O failure.

mod commands;
mod report;

use std::fmt;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "thermoq",
    version,
    about = "Transient QFI for qubit thermometers"
)]
struct Cli {
    /// Worker threads for sweeps (falls back to THERMOQ_JOBS, then to the
    /// available parallelism). Output never depends on the worker count.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Markovian relaxation trajectory: CSV of t,q1,dq_dbeta,qfi,ratio.
    Markov(MarkovArgs),
    /// Probe+auxiliary trajectory: CSV of t,q1,qfi.
    Nonmarkov(NonmarkovArgs),
    /// Enhancement scan over a parameter grid; JSON report.
    TheoremScan(TheoremScanArgs),
    /// Paired hot/cold non-Markovian comparison; CSVs plus JSON summary.
    Fig2(Fig2Args),
}

#[derive(Args)]
struct PhysicsArgs {
    /// Bath inverse temperature β (natural units).
    #[arg(long)]
    beta: f64,
    /// Probe half-gap ω of H = ω σ_z.
    #[arg(long)]
    omega: f64,
    /// Ohmic coupling constant κ.
    #[arg(long)]
    kappa: f64,
    /// Initial excited population p ∈ [0, 1/2].
    #[arg(long)]
    p: f64,
}

#[derive(Args)]
struct MarkovArgs {
    #[command(flatten)]
    physics: PhysicsArgs,
    /// Horizon, or `auto` for 8/|λ|.
    #[arg(long, default_value = "auto")]
    t_max: TMax,
    /// Trajectory samples (uniform grid including both endpoints).
    #[arg(long, default_value_t = 400)]
    samples: usize,
    /// Output CSV path.
    #[arg(long)]
    out: std::path::PathBuf,
    #[arg(long, value_enum, default_value_t = MarkovMethod::Closed)]
    method: MarkovMethod,
}

#[derive(Args)]
struct NonmarkovArgs {
    #[command(flatten)]
    physics: PhysicsArgs,
    /// Coherent probe–auxiliary coupling J.
    #[arg(long)]
    coupling: f64,
    /// Horizon, or `auto` for 2/Γ_T.
    #[arg(long, default_value = "auto")]
    t_max: TMax,
    #[arg(long, default_value_t = 400)]
    samples: usize,
    #[arg(long)]
    out: std::path::PathBuf,
    #[arg(long, value_enum, default_value_t = NonmarkovMethod::Analytic)]
    method: NonmarkovMethod,
}

#[derive(Args)]
struct TheoremScanArgs {
    /// JSON grid configuration (flat: beta_list, omega_list, kappa, p_list,
    /// include_near_thermal, max_omega_beta).
    #[arg(long, conflicts_with = "default", required_unless_present = "default")]
    config: Option<std::path::PathBuf>,
    /// Run the built-in default grid.
    #[arg(long)]
    default: bool,
    /// Output JSON report path.
    #[arg(long, default_value = "theorem_scan.json")]
    out: std::path::PathBuf,
}

#[derive(Args)]
struct Fig2Args {
    /// Directory for the per-pair CSVs and fig2_summary.json.
    #[arg(long, default_value = ".")]
    out_dir: std::path::PathBuf,
    #[arg(long, default_value_t = 1.0)]
    omega: f64,
    #[arg(long, default_value_t = 1e-4)]
    kappa: f64,
    #[arg(long, default_value_t = 10.0)]
    coupling: f64,
    /// Bath β values (repeatable).
    #[arg(long = "beta", num_args = 1.., default_values_t = [0.2, 0.5])]
    beta_list: Vec<f64>,
    /// Initial populations (repeatable).
    #[arg(long = "p", num_args = 1.., default_values_t = [0.0, 0.5])]
    p_list: Vec<f64>,
    #[arg(long, default_value_t = 2000)]
    samples: usize,
    /// Horizon override; defaults to 2/Γ_T per β.
    #[arg(long)]
    t_max: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum MarkovMethod {
    Closed,
    Ode,
}

#[derive(Clone, Copy, ValueEnum)]
enum NonmarkovMethod {
    Analytic,
    Rk4,
}

/// Horizon flag: `auto` or an explicit time.
#[derive(Clone, Copy)]
enum TMax {
    Auto,
    Value(f64),
}

impl std::str::FromStr for TMax {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(TMax::Auto);
        }
        s.parse::<f64>()
            .map(TMax::Value)
            .map_err(|_| format!("expected a number or `auto`, got {s:?}"))
    }
}

/// CLI failure with its exit code.
pub enum CliError {
    /// Exit 2: bad flags, bad config, violated physics invariant.
    Param(String),
    /// Exit 1: a verification run reported violations or an internal
    /// cross-check tripped.
    Verification(String),
    /// Exit 3: filesystem trouble.
    Io(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Param(m) | CliError::Verification(m) | CliError::Io(m) => write!(f, "{m}"),
        }
    }
}

impl From<thermoq::Error> for CliError {
    fn from(e: thermoq::Error) -> Self {
        match &e {
            thermoq::Error::Consistency(_) => CliError::Verification(e.to_string()),
            _ => CliError::Param(e.to_string()),
        }
    }
}

pub(crate) fn io_err(path: &std::path::Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    let jobs = cli.jobs.or_else(|| {
        std::env::var("THERMOQ_JOBS")
            .ok()
            .and_then(|v| v.parse::<usize>().ok())
    });
    if let Some(n) = jobs {
        if rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .is_err()
        {
            eprintln!("warning: worker pool already initialized; --jobs ignored");
        }
    }

    let result = match cli.command {
        Command::Markov(args) => commands::markov(&args),
        Command::Nonmarkov(args) => commands::nonmarkov(&args),
        Command::TheoremScan(args) => commands::theorem_scan(&args),
        Command::Fig2(args) => commands::fig2(&args),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                CliError::Verification(_) => ExitCode::from(1),
                CliError::Param(_) => ExitCode::from(2),
                CliError::Io(_) => ExitCode::from(3),
            }
        }
    }
}
