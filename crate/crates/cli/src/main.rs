use std::process::ExitCode;

use clap::Parser;
use zigzag_cli::{run, Cli, Outcome, EXIT_ERROR, EXIT_OK, EXIT_TOLERANCE};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Pass) => ExitCode::from(EXIT_OK),
        Ok(Outcome::Fail) => ExitCode::from(EXIT_TOLERANCE),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
