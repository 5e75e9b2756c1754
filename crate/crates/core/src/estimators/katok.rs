//! Katok spanning cost: the cheapest family of `n`-cylinders whose
//! `μ`-measure reaches `1 − γ`, cheapness measured by `Σ exp(S_nψ)`.
//!
//! The covering problem is a fractional-knapsack-like selection. Taking
//! cylinders in increasing order of `exp(S_nψ(w)) / μ[w]` is optimal for the
//! fractional relaxation; the integral greedy exceeds it by at most part of
//! one cylinder. When all cylinders cost the same the greedy is the exact
//! optimum. Otherwise the report carries `[lower, upper]` from the
//! relaxation and the greedy.

use std::cmp::Ordering;
use std::collections::HashMap;

use super::{for_each_word, EstimateReport, LogSumExp};
use crate::error::{Error, Result};
use crate::symbolic::{check_word_budget, MarkovMeasure, Potential, SftSystem, DEFAULT_WORD_CAP};

/// Relative spread of cylinder costs treated as uniform.
const UNIFORM_COST_TOL: f64 = 1e-12;

/// A group of cylinders sharing cost and measure.
#[derive(Debug, Clone, Copy)]
struct Class {
    cost: f64,
    log_measure: f64,
    count: f64,
}

impl Class {
    fn key(&self) -> f64 {
        self.cost - self.log_measure
    }
}

fn by_efficiency(a: &Class, b: &Class) -> Ordering {
    a.key()
        .total_cmp(&b.key())
        .then_with(|| b.log_measure.total_cmp(&a.log_measure))
}

fn check_inputs(sft: &SftSystem, mu: &MarkovMeasure, psi: &Potential, gamma: f64, n: usize) -> Result<()> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::InvalidParameter(format!("gamma must lie in (0, 1), got {gamma}")));
    }
    if mu.alphabet_size() != sft.alphabet_size() {
        return Err(Error::InvalidMeasure(format!(
            "measure over {} symbols used with an alphabet of size {}",
            mu.alphabet_size(),
            sft.alphabet_size()
        )));
    }
    psi.check_host(sft)?;
    if n < psi.depth() || n == 0 {
        return Err(Error::WordTooShort { len: n, depth: psi.depth() });
    }
    Ok(())
}

/// `(1/n) log` of the Katok spanning cost at level `1 − γ`.
///
/// Enumerates cylinders when `alphabet_size^n` is within the default word
/// budget, and otherwise groups them by type (first symbol, last symbol,
/// transition counts), which needs `ψ` of depth at most 2.
pub fn katok_entropy_estimate(
    sft: &SftSystem,
    mu: &MarkovMeasure,
    psi: &Potential,
    gamma: f64,
    n: usize,
) -> Result<EstimateReport> {
    check_inputs(sft, mu, psi, gamma, n)?;
    if check_word_budget(sft, n, DEFAULT_WORD_CAP).is_ok() {
        katok_by_enumeration(sft, mu, psi, gamma, n)
    } else {
        katok_entropy_by_types(sft, mu, psi, gamma, n)
    }
}

fn katok_by_enumeration(
    sft: &SftSystem,
    mu: &MarkovMeasure,
    psi: &Potential,
    gamma: f64,
    n: usize,
) -> Result<EstimateReport> {
    let mut classes = Vec::new();
    for_each_word(sft, n, &[psi], |w, sums| {
        let m = mu.cylinder(w);
        if m > 0.0 {
            classes.push(Class { cost: sums[0], log_measure: m.ln(), count: 1.0 });
        }
    });
    Ok(greedy_cover(classes, gamma, n))
}

/// Katok estimate computed over cylinder types instead of cylinders, exact
/// for any `n` the type count allows. `ψ` must have depth at most 2.
pub fn katok_entropy_by_types(
    sft: &SftSystem,
    mu: &MarkovMeasure,
    psi: &Potential,
    gamma: f64,
    n: usize,
) -> Result<EstimateReport> {
    check_inputs(sft, mu, psi, gamma, n)?;
    if psi.depth() > 2 {
        return Err(Error::InvalidPotential(format!(
            "type classes need depth <= 2, got depth {}",
            psi.depth()
        )));
    }
    if n > u16::MAX as usize {
        return Err(Error::InvalidParameter(format!("n = {n} exceeds the type-count range")));
    }

    let a = sft.alphabet_size();
    let edges: Vec<(usize, usize)> = (0..a)
        .flat_map(|i| sft.successors(i).map(move |j| (i, j)))
        .collect();
    let edge_index: HashMap<(usize, usize), usize> =
        edges.iter().enumerate().map(|(e, &ij)| (ij, e)).collect();

    type Key = (usize, usize, Vec<u16>);
    let mut layer: HashMap<Key, f64> = (0..a).map(|s| ((s, s, vec![0; edges.len()]), 1.0)).collect();
    for _ in 1..n {
        let mut next: HashMap<Key, f64> = HashMap::with_capacity(layer.len() * 2);
        for ((first, last, counts), mult) in &layer {
            for j in sft.successors(*last) {
                let mut c = counts.clone();
                c[edge_index[&(*last, j)]] += 1;
                *next.entry((*first, j, c)).or_insert(0.0) += mult;
            }
        }
        layer = next;
    }

    let stationary = mu.stationary();
    let p = mu.stochastic();
    let log_p: Vec<f64> = edges.iter().map(|&(i, j)| p[(i, j)].ln()).collect();
    let edge_cost: Vec<f64> = edges
        .iter()
        .map(|&(i, j)| match psi.depth() {
            1 => psi.value(&[i]),
            _ => psi.value(&[i, j]),
        })
        .map(|v| v.expect("allowed edge"))
        .collect();

    let mut classes: Vec<Class> = Vec::with_capacity(layer.len());
    for ((first, last, counts), mult) in layer {
        let mut log_measure = stationary[first].ln();
        let mut cost = match psi.depth() {
            1 => psi.value(&[last]).expect("symbol"),
            _ => 0.0,
        };
        for (e, &c) in counts.iter().enumerate() {
            if c > 0 {
                log_measure += c as f64 * log_p[e];
                cost += c as f64 * edge_cost[e];
            }
        }
        if log_measure > f64::NEG_INFINITY {
            classes.push(Class { cost, log_measure, count: mult });
        }
    }
    Ok(greedy_cover(classes, gamma, n))
}

fn greedy_cover(mut classes: Vec<Class>, gamma: f64, n: usize) -> EstimateReport {
    classes.sort_by(by_efficiency);
    let (lo, hi) = classes.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), c| {
        (lo.min(c.cost), hi.max(c.cost))
    });
    let uniform = hi - lo <= UNIFORM_COST_TOL * (1.0 + lo.abs().max(hi.abs()));

    let need = 1.0 - gamma;
    let mut covered = 0.0;
    let mut taken = 0.0;
    let mut upper = LogSumExp::new();
    let mut lower = LogSumExp::new();
    for (idx, class) in classes.iter().enumerate() {
        let m = class.log_measure.exp();
        let mass = class.count * m;
        let last = idx + 1 == classes.len();
        if covered + mass < need && !last {
            covered += mass;
            taken += class.count;
            upper.add_weighted(class.cost, class.count);
            lower.add_weighted(class.cost, class.count);
            continue;
        }
        let fraction = ((need - covered) / m).clamp(0.0, class.count);
        let whole = fraction.ceil().min(class.count).max(1.0);
        taken += whole;
        upper.add_weighted(class.cost, whole);
        lower.add_weighted(class.cost, fraction);
        break;
    }

    let nf = n as f64;
    let value = upper.value().map(|v| v / nf);
    let bounds = match (uniform, lower.value(), value) {
        (false, Some(l), Some(u)) if l / nf < u => Some((l / nf, u)),
        _ => None,
    };
    EstimateReport {
        n,
        delta: None,
        value,
        word_count: taken as u128,
        exact: bounds.is_none(),
        bounds,
    }
}
