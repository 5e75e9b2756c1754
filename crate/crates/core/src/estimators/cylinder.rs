use super::{for_each_word, window_count, Enumeration, EstimateReport, LogSumExp};
use crate::error::{Error, Result};
use crate::symbolic::{check_word_budget, Potential, SftSystem};

/// Slack on the level-set test `|S_nφ/n − α| ≤ δ`, absorbing the rounding
/// of the Birkhoff average.
const LEVEL_SLACK: f64 = 1e-12;

fn check_inputs(sft: &SftSystem, n: usize, potentials: &[&Potential], cap: u64) -> Result<()> {
    for p in potentials {
        p.check_host(sft)?;
        if n < p.depth() {
            return Err(Error::WordTooShort { len: n, depth: p.depth() });
        }
    }
    check_word_budget(sft, n, cap)
}

/// `(1/n) log Σ_{|w|=n} exp(S_nψ(w))` over all admissible `n`-words.
pub fn separated_pressure_estimate(sft: &SftSystem, psi: &Potential, n: usize) -> Result<EstimateReport> {
    separated_pressure_estimate_with(sft, psi, n, Enumeration::default())
}

pub fn separated_pressure_estimate_with(
    sft: &SftSystem,
    psi: &Potential,
    n: usize,
    config: Enumeration,
) -> Result<EstimateReport> {
    check_inputs(sft, n, &[psi], config.word_cap)?;
    let mut acc = LogSumExp::new();
    let mut count: u128 = 0;
    for_each_word(sft, n, &[psi], |_, sums| {
        acc.add(sums[0]);
        count += 1;
    });
    Ok(EstimateReport {
        n,
        delta: None,
        value: acc.value().map(|v| v / n as f64),
        word_count: count,
        exact: true,
        bounds: None,
    })
}

/// `(1/n) log Σ exp(S_nψ(w))` over the admissible `n`-words whose Birkhoff
/// average of `φ` lies within `δ` of `α`.
///
/// An empty level set gives a report with `value == None`.
pub fn level_set_pressure_estimate(
    sft: &SftSystem,
    phi: &Potential,
    psi: &Potential,
    alpha: f64,
    delta: f64,
    n: usize,
) -> Result<EstimateReport> {
    level_set_pressure_estimate_with(sft, phi, psi, alpha, delta, n, Enumeration::default())
}

pub fn level_set_pressure_estimate_with(
    sft: &SftSystem,
    phi: &Potential,
    psi: &Potential,
    alpha: f64,
    delta: f64,
    n: usize,
    config: Enumeration,
) -> Result<EstimateReport> {
    if !(delta >= 0.0 && delta.is_finite()) || !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "level set needs finite alpha and delta >= 0 (got alpha = {alpha}, delta = {delta})"
        )));
    }
    check_inputs(sft, n, &[phi, psi], config.word_cap)?;
    let windows = window_count(phi, n) as f64;
    let mut acc = LogSumExp::new();
    let mut count: u128 = 0;
    for_each_word(sft, n, &[phi, psi], |_, sums| {
        if (sums[0] / windows - alpha).abs() <= delta + LEVEL_SLACK {
            acc.add(sums[1]);
            count += 1;
        }
    });
    Ok(EstimateReport {
        n,
        delta: Some(delta),
        value: acc.value().map(|v| v / n as f64),
        word_count: count,
        exact: true,
        bounds: None,
    })
}
