//! `superlab`: reproduce the super-observable figures and run individual
//! computations from the command line.
//!
//! Exit codes: 0 success, 1 check failure, 2 usage error, 3 numerical error.

mod checks;
mod commands;
mod config;
mod figures;
mod output;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::Ctx;

#[derive(Debug, Parser)]
#[command(
    name = "superlab",
    version,
    about = "Local super-observable fields for band-limited quantum superpositions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Svg,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScalingArg {
    /// ω_N = ω₀/N
    InverseN,
    /// ω_N = ω₀/N²
    InverseN2,
}

impl ScalingArg {
    pub fn to_core(self) -> superlab_core::oscillator::FrequencyScaling {
        match self {
            ScalingArg::InverseN => superlab_core::oscillator::FrequencyScaling::InverseN,
            ScalingArg::InverseN2 => superlab_core::oscillator::FrequencyScaling::InverseN2,
        }
    }
}

/// Options shared by every subcommand. Precedence for each value:
/// built-in default < SUPERLAB_QUAD_ORDER (quadrature only) < config file
/// < command-line flag.
#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Flat `key = value` config file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory for data files (default: current directory).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format for figure data.
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    /// Significant digits for printed floats (default 12).
    #[arg(long)]
    pub precision: Option<usize>,
    /// Quadrature density: Gauss-Legendre nodes per unit dimensionless
    /// length for energy integrals (default 200).
    #[arg(long)]
    pub quad_order: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Reproduce one of the five figures (CSV and/or SVG plus a sidecar of
    /// resolved parameters).
    Fig(FigArgs),
    /// Local energy profile of the sequence state h_N.
    LocalEnergy(commands::LocalEnergyArgs),
    /// Spectral-basis energy expectation of h_N.
    SpectralEnergy(commands::SpectralEnergyArgs),
    /// Window-conditioned energy of h_N with postselection probability.
    WindowedEnergy(commands::WindowedEnergyArgs),
    /// Evolved state h_N(x, t) and its local time-energy on a time grid.
    TimeEvolve(commands::TimeEvolveArgs),
    /// Rotor local L² profile and postselected time phase.
    Rotor(commands::RotorArgs),
    /// Verify the Hermite binomial identity against an exact-arithmetic sum.
    CheckIdentity(checks::CheckIdentityArgs),
    /// Verify the weak-value sum rule for a chosen state.
    SumRule(checks::SumRuleArgs),
}

#[derive(Debug, Args)]
pub struct FigArgs {
    /// Figure number, 1 through 5.
    #[arg(long)]
    id: u32,
    /// Sequence indices for the figure ladder, comma-separated.
    #[arg(long, value_delimiter = ',')]
    n_values: Option<Vec<u64>>,
    /// Top N for figures swept over N (figs 3-4).
    #[arg(long)]
    n_max: Option<u64>,
    /// Superoscillation parameters, comma-separated (figs 3-4).
    #[arg(long, value_delimiter = ',')]
    g_values: Option<Vec<f64>>,
    /// g for single-g figures (1, 2, 5).
    #[arg(long)]
    g: Option<f64>,
    /// Spatial grid as lo:hi:count.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    /// Time grid as lo:hi:count, in units of 1/ω₀.
    #[arg(long, allow_hyphen_values = true)]
    t_grid: Option<String>,
    /// Window half-length L (fig 4).
    #[arg(long)]
    window: Option<f64>,
    /// mω₀/ħ.
    #[arg(long)]
    scale: Option<f64>,
    #[command(flatten)]
    common: CommonArgs,
}

/// Application-level failure with its contractual exit code.
pub enum AppError {
    Usage(String),
    Numerical(String),
}

impl From<superlab_core::Error> for AppError {
    fn from(e: superlab_core::Error) -> Self {
        match e {
            superlab_core::Error::Domain(m) | superlab_core::Error::Precondition(m) => {
                AppError::Usage(m)
            }
            superlab_core::Error::Numerical(m) | superlab_core::Error::Singular(m) => {
                AppError::Numerical(m)
            }
        }
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Numerical(format!("io error: {e}"))
    }
}

pub fn exit_code_for(e: &AppError) -> u8 {
    match e {
        AppError::Usage(_) => 2,
        AppError::Numerical(_) => 3,
    }
}

fn run(cli: Cli) -> Result<u8, AppError> {
    match cli.command {
        Command::Fig(args) => {
            let ctx = Ctx::load(&args.common)?;
            figures::run_fig(&args, ctx)?;
            Ok(0)
        }
        Command::LocalEnergy(args) => commands::local_energy_cmd(args),
        Command::SpectralEnergy(args) => commands::spectral_energy_cmd(args),
        Command::WindowedEnergy(args) => commands::windowed_energy_cmd(args),
        Command::TimeEvolve(args) => commands::time_evolve_cmd(args),
        Command::Rotor(args) => commands::rotor_cmd(args),
        Command::CheckIdentity(args) => checks::check_identity(args),
        Command::SumRule(args) => checks::sum_rule(args),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::from(0);
            }
            let _ = e.print();
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            match &e {
                AppError::Usage(m) => eprintln!("superlab: usage error: {m}"),
                AppError::Numerical(m) => eprintln!("superlab: numerical error: {m}"),
            }
            ExitCode::from(exit_code_for(&e))
        }
    }
}
