//! Command dispatch.

use thermo_core::spectra::{constrained_pressure_with, spectrum_curve_with, DualityOptions};
use thermo_core::{
    brute_force_constrained, dimension_spectrum, equilibrium_measure, flow_entropy_spectrum,
    katok_entropy_estimate, level_set_dimension, level_set_pressure_estimate, pressure,
    separated_pressure_estimate, spectrum_domain, ConstrainedPressure, Error as CoreError,
    EstimateReport, Potential, SuspensionSystem,
};
use thiserror::Error;

use crate::config::{validate_run, ConfigError, RunParams, System, SystemConfig};
use crate::output::{Cell, Table};

pub const DEFAULT_GRID: usize = 21;
pub const DEFAULT_N: usize = 12;
pub const DEFAULT_DELTA: f64 = 0.05;
pub const DEFAULT_RESOLUTION: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Pressure,
    Spectrum,
    FlowSpectrum,
    Dimension,
    Estimate,
    Oracle,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Missing(String),
    #[error(transparent)]
    Compute(#[from] CoreError),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    /// 2: configuration, 3: α outside the domain, 4: a solver did not
    /// converge, 1: anything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Missing(_) => 2,
            CliError::Compute(e) => match e {
                CoreError::AlphaOutOfDomain { .. } => 3,
                CoreError::ConvergenceFailure { .. }
                | CoreError::BracketFailure(_)
                | CoreError::NoSignChange(_) => 4,
                CoreError::ResourceLimit { .. }
                | CoreError::OracleScaleExceeded { .. }
                | CoreError::InvalidParameter(_)
                | CoreError::InvalidPotential(_)
                | CoreError::InvalidMeasure(_)
                | CoreError::WordTooShort { .. } => 2,
                _ => 1,
            },
            CliError::Io(_) => 1,
        }
    }
}

/// Resolved run parameters: flags over `[run]` values.
pub fn merge(config: &RunParams, flags: &RunParams) -> Result<RunParams, CliError> {
    let run = RunParams {
        grid: flags.grid.or(config.grid),
        n: flags.n.or(config.n),
        alpha: flags.alpha.or(config.alpha),
        delta: flags.delta.or(config.delta),
        gamma: flags.gamma.or(config.gamma),
        tolerance: flags.tolerance.or(config.tolerance),
        resolution: flags.resolution.or(config.resolution),
    };
    validate_run(&run).map_err(|e| CliError::Config(e.into()))?;
    Ok(run)
}

fn required<'a>(config: &'a SystemConfig, name: &str, cmd: &str) -> Result<&'a Potential, CliError> {
    config
        .potential(name)
        .ok_or_else(|| CliError::Missing(format!("`{cmd}` needs a potential named `{name}`")))
}

fn psi_or_zero(config: &SystemConfig) -> Potential {
    config.potential("psi").cloned().unwrap_or_else(|| Potential::zero(&config.sft()))
}

fn duality_options(run: &RunParams) -> DualityOptions {
    let mut opts = DualityOptions::default();
    if let Some(t) = run.tolerance {
        opts.gradient_tol = t;
    }
    opts
}

fn spectrum_row(p: &ConstrainedPressure) -> Vec<Cell> {
    vec![Cell::Num(p.alpha), Cell::Nats(p.value), Cell::Num(p.q_opt), Cell::Bool(p.boundary)]
}

fn estimate_row(kind: &str, r: &EstimateReport) -> Vec<Cell> {
    let (lower, upper) = match r.bounds {
        Some((l, u)) => (Cell::Nats(l), Cell::Nats(u)),
        None => (Cell::Empty, Cell::Empty),
    };
    vec![
        Cell::Text(kind.into()),
        Cell::Int(r.n as u128),
        r.delta.map_or(Cell::Empty, Cell::Num),
        r.value.map_or(Cell::Text("empty".into()), Cell::Nats),
        Cell::Int(r.word_count),
        Cell::Bool(r.exact),
        lower,
        upper,
    ]
}

/// Runs `cmd` on `config` with resolved parameters `run`.
pub fn run_command(cmd: Command, config: &SystemConfig, run: &RunParams) -> Result<Table, CliError> {
    let sft = config.sft();
    match cmd {
        Command::Pressure => {
            let psi = psi_or_zero(config);
            let mut t = Table::new(&["value"]);
            t.push(vec![Cell::Nats(pressure(&sft, &psi)?)]);
            Ok(t)
        }
        Command::Spectrum => {
            let phi = required(config, "phi", "spectrum")?;
            let psi = psi_or_zero(config);
            let opts = duality_options(run);
            let mut t = Table::new(&["alpha", "value", "q_opt", "boundary"]);
            if let Some(alpha) = run.alpha {
                t.push(spectrum_row(&constrained_pressure_with(&sft, phi, &psi, alpha, opts)?));
            } else {
                let curve = spectrum_curve_with(&sft, phi, &psi, run.grid.unwrap_or(DEFAULT_GRID), opts)?;
                for p in &curve.points {
                    t.push(spectrum_row(p));
                }
            }
            Ok(t)
        }
        Command::FlowSpectrum => {
            let phi = required(config, "phi", "flow-spectrum")?;
            let rho = required(config, "rho", "flow-spectrum")?;
            let sys = SuspensionSystem::new(sft.clone(), rho.clone(), phi.clone())?;
            let alphas = match run.alpha {
                Some(a) => vec![a],
                None => sys.ratio_domain()?.grid(run.grid.unwrap_or(DEFAULT_GRID)),
            };
            let mut t = Table::new(&["alpha", "entropy", "residual", "degenerate"]);
            for a in alphas {
                let p = flow_entropy_spectrum(&sys, a)?;
                t.push(vec![Cell::Num(p.alpha), Cell::Nats(p.entropy), Cell::Num(p.residual), Cell::Bool(p.degenerate)]);
            }
            Ok(t)
        }
        Command::Dimension => {
            let System::IntervalMap(map) = &config.system else {
                return Err(CliError::Missing("`dimension` needs an [interval-map] section".into()));
            };
            let phi = required(config, "phi", "dimension")?;
            let results = match run.alpha {
                Some(a) => vec![level_set_dimension(map, phi, a)?],
                None => dimension_spectrum(map, phi, run.grid.unwrap_or(DEFAULT_GRID))?,
            };
            let mut t = Table::new(&["alpha", "dim", "residual"]);
            for r in results {
                t.push(vec![Cell::Num(r.alpha), Cell::Num(r.dim), Cell::Num(r.residual)]);
            }
            Ok(t)
        }
        Command::Estimate => {
            let psi = psi_or_zero(config);
            let n = run.n.unwrap_or(DEFAULT_N);
            let mut t = Table::new(&["estimator", "n", "delta", "value", "word_count", "exact", "lower", "upper"]);
            t.push(estimate_row("separated", &separated_pressure_estimate(&sft, &psi, n)?));
            if let Some(alpha) = run.alpha {
                let phi = required(config, "phi", "estimate --alpha")?;
                let delta = run.delta.unwrap_or(DEFAULT_DELTA);
                t.push(estimate_row("level-set", &level_set_pressure_estimate(&sft, phi, &psi, alpha, delta, n)?));
            }
            if let Some(gamma) = run.gamma {
                let mu_potential = config.potential("mu").cloned().unwrap_or_else(|| Potential::zero(&sft));
                let mu = equilibrium_measure(&sft, &mu_potential)?;
                t.push(estimate_row("katok", &katok_entropy_estimate(&sft, &mu, &psi, gamma, n)?));
            }
            Ok(t)
        }
        Command::Oracle => {
            let phi = required(config, "phi", "oracle")?;
            let psi = psi_or_zero(config);
            let resolution = run.resolution.unwrap_or(DEFAULT_RESOLUTION);
            let opts = duality_options(run);
            let alphas = match run.alpha {
                Some(a) => vec![a],
                None => spectrum_domain(&sft, phi)?.grid(run.grid.unwrap_or(DEFAULT_GRID)),
            };
            let mut t = Table::new(&["alpha", "oracle", "duality", "difference"]);
            for a in alphas {
                let oracle = brute_force_constrained(&sft, phi, &psi, a, resolution)?;
                let dual = constrained_pressure_with(&sft, phi, &psi, a, opts)?.value;
                t.push(vec![Cell::Num(a), Cell::Nats(oracle), Cell::Nats(dual), Cell::Nats(oracle - dual)]);
            }
            Ok(t)
        }
    }
}
