//! Command-line front end for the zig-zag lattice engines.
//!
//! Exit codes: `0` success, `2` usage, geometry or engine error, `3` a
//! tolerance check failed.

pub mod args;
pub mod commands;
pub mod error;
pub mod report;

pub use args::Cli;
pub use commands::Outcome;
pub use error::CliError;
pub use report::Report;

use args::Command;

pub const EXIT_OK: u8 = 0;
pub const EXIT_ERROR: u8 = 2;
pub const EXIT_TOLERANCE: u8 = 3;

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Solve(a) => commands::solve(a),
        Command::Compare(a) => commands::compare(a),
        Command::Mc(a) => commands::mc(a),
        Command::Table1(a) => commands::table1(a),
    }
}
