//! Command-line front end for `photon-cycle`: photon-number distributions,
//! Wigner grids and `Q` sweeps as CSV or JSON, the reference figure sets,
//! and the closed-form versus oracle validation report.

pub mod commands;
pub mod config;
pub mod output;
pub mod validate;

use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub use config::{Cli, Command};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("cannot write {}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },

    #[error(transparent)]
    Core(#[from] photon_cycle::Error),

    #[error("validation failed: {0} check(s) failed")]
    ValidationFailed(usize),
}

impl CliError {
    /// 1 for failed validation, 3 for a null state, 2 otherwise.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::ValidationFailed(_) => 1,
            CliError::Core(photon_cycle::Error::NullState) => 3,
            CliError::Usage(_) | CliError::Io { .. } | CliError::Core(_) => 2,
        }
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Pnd(args) => commands::run_pnd(&args),
        Command::Wigner(args) => commands::run_wigner(&args),
        Command::QSweep(args) => commands::run_q_sweep(&args),
        Command::Figure(args) => commands::run_figure(&args),
        Command::Validate(args) => validate::run_validate(&args),
    }
}
