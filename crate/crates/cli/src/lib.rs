//! Command-line front end: parses system descriptions, runs a computation
//! and writes its result as CSV.

pub mod commands;
pub mod config;
pub mod output;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::Parser;

use commands::{merge, run_command, CliError, Command};
use config::{parse_config, RunParams};

#[derive(Debug, Parser)]
#[command(name = "thermo", version, about = "Pressure, level-set spectra and dimensions on subshifts of finite type")]
pub struct Cli {
    /// Computation to run.
    #[arg(value_enum)]
    pub command: Command,
    /// System description file.
    pub config: PathBuf,
    /// Write CSV here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Grid size over the spectrum domain.
    #[arg(long, value_name = "N")]
    pub grid: Option<usize>,
    /// Single level instead of a grid.
    #[arg(long, value_name = "X", allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Level-set tolerance for `estimate`.
    #[arg(long, value_name = "D")]
    pub delta: Option<f64>,
    /// Excluded measure for the Katok estimate.
    #[arg(long, value_name = "G")]
    pub gamma: Option<f64>,
    /// Word length for `estimate`.
    #[arg(long, value_name = "N")]
    pub n: Option<usize>,
    /// Report entropies and pressures in bits.
    #[arg(long)]
    pub bits: bool,
    /// Tolerance on |dP/dq - alpha| in the duality solve.
    #[arg(long, value_name = "T")]
    pub tolerance: Option<f64>,
}

/// Runs the parsed invocation; returns the process exit code.
pub fn execute(cli: &Cli) -> u8 {
    match try_execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("thermo: {e}");
            e.exit_code()
        }
    }
}

fn try_execute(cli: &Cli) -> Result<(), CliError> {
    let text = fs::read_to_string(&cli.config)
        .map_err(|e| CliError::Missing(format!("cannot read {}: {e}", cli.config.display())))?;
    let config = parse_config(&text)?;
    let flags = RunParams {
        grid: cli.grid,
        n: cli.n,
        alpha: cli.alpha,
        delta: cli.delta,
        gamma: cli.gamma,
        tolerance: cli.tolerance,
        resolution: None,
    };
    let run = merge(&config.run, &flags)?;
    let table = run_command(cli.command, &config, &run)?;
    let io_err = |e: csv::Error| CliError::Io(e.to_string());
    match &cli.out {
        Some(path) => {
            let file = fs::File::create(path)
                .map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))?;
            table.write(io::BufWriter::new(file), cli.bits).map_err(io_err)
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            table.write(&mut lock, cli.bits).map_err(io_err)?;
            lock.flush().map_err(|e| CliError::Io(e.to_string()))
        }
    }
}
