use std::fmt;

use super::cycles::{edge_weights, max_mean_cycle, min_mean_cycle};
use super::{higher_block_recode, Potential, SftSystem};
use crate::error::Result;

/// A closed interval `[min, max]`, possibly a single point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub min: f64,
    pub max: f64,
}

impl Interval {
    pub fn new(min: f64, max: f64) -> Self {
        debug_assert!(min <= max);
        Interval { min, max }
    }

    pub fn width(&self) -> f64 {
        self.max - self.min
    }

    /// Widths below `1e-12·(1 + |endpoints|)` count as a single point.
    pub fn is_degenerate(&self) -> bool {
        self.width() <= 1e-12 * (1.0 + self.min.abs().max(self.max.abs()))
    }

    pub fn contains(&self, x: f64, slack: f64) -> bool {
        x >= self.min - slack && x <= self.max + slack
    }

    /// `size` evenly spaced points including both ends; one point when
    /// the interval is degenerate.
    pub fn grid(&self, size: usize) -> Vec<f64> {
        if self.is_degenerate() || size < 2 {
            return vec![self.min];
        }
        let step = self.width() / (size - 1) as f64;
        (0..size)
            .map(|i| if i == size - 1 { self.max } else { self.min + step * i as f64 })
            .collect()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.min, self.max)
    }
}

/// The spectrum `L_φ = {∫φ dμ}` over invariant measures: the interval
/// between the minimum and maximum cycle means of `φ`.
pub fn spectrum_domain(sft: &SftSystem, phi: &Potential) -> Result<Interval> {
    let r = higher_block_recode(sft, std::slice::from_ref(phi))?;
    let weights = edge_weights(&r.sft, &r.potentials[0]);
    let min = min_mean_cycle(&weights);
    let max = max_mean_cycle(&weights).max(min);
    Ok(Interval::new(min, max))
}
