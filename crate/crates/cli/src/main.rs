use std::process::ExitCode;

use clap::Parser;
use thermo_cli::{execute, Cli};

fn main() -> ExitCode {
    ExitCode::from(execute(&Cli::parse()))
}
