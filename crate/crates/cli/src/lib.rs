//! Command-line front end for the `anchornn` library: synthetic data
//! generation, single clustering runs, seeded parameter sweeps with timing,
//! and consistency diagnostics. Reports are versioned JSON (`"schema": 1`).

pub mod args;
pub mod commands;
pub mod error;
pub mod io;
pub mod report;

pub use error::{CliError, CliResult};

use args::{Cli, Command};

/// Executes a parsed command line.
pub fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Generate(a) => commands::cmd_generate(a),
        Command::Cluster(a) => commands::cmd_cluster(a),
        Command::Sweep(a) => commands::cmd_sweep(a),
        Command::Diag(a) => commands::cmd_diag(a),
    }
}
