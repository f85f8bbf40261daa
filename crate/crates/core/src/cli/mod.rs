//! The `higgs-harmonic` command line.

mod local_model;
mod output;
mod probe;
mod solve;
mod stability;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::error::Error;
pub use output::Output;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

/// Environment variable reserved for seeding future stochastic checks.
pub const SEED_ENV: &str = "HIGGS_HARMONIC_SEED";

#[derive(Debug, Parser)]
#[command(name = "higgs-harmonic", version, about = "Harmonic metrics of rank-2 Higgs bundles near a puncture")]
struct Cli {
    /// Worker threads for independent family members (1 keeps runs sequential).
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Directory for JSON/CSV/SVG data files; without it only the JSON
    /// summary is printed.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form cone and cusp model.
    #[command(subcommand)]
    LocalModel(local_model::LocalModelCmd),
    /// Parabolic degree and slope stability.
    #[command(subcommand)]
    Stability(stability::StabilityCmd),
    /// Newton solves of the reduced equation and curvature checks.
    #[command(subcommand)]
    Solve(solve::SolveCmd),
    /// Analyticity and monodromy probes over families.
    #[command(subcommand)]
    Probe(probe::ProbeCmd),
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let mut root = &e;
        while let Error::FamilyMember { source, .. } = root {
            root = source;
        }
        match root {
            Error::NotConverged { .. } | Error::SingularJacobian(_) | Error::NonFinite(_) => {
                CliError::Numerical(e.to_string())
            }
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Validation(format!("i/o: {e}"))
    }
}

pub(crate) type CliResult<T> = std::result::Result<T, CliError>;

/// Parse `args` (including the program name), run the subcommand and
/// return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    if cli.jobs == 0 {
        eprintln!("error: --jobs must be at least 1");
        return EXIT_USAGE;
    }
    let mut out = Output::new(cli.out_dir.clone());
    let result = match &cli.command {
        Command::LocalModel(cmd) => local_model::run(cmd, &mut out),
        Command::Stability(cmd) => stability::run(cmd, &mut out),
        Command::Solve(cmd) => solve::run(cmd, &mut out),
        Command::Probe(cmd) => probe::run(cmd, cli.jobs, &mut out),
    };
    let result = result.and_then(|()| out.flush());
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
