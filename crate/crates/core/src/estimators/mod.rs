//! Definition-level estimators.
//!
//! At the cylinder scale the admissible `n`-words form a maximal
//! `(n, ε)`-separated set (and a minimal spanning set) for every `ε` below
//! the cylinder diameter, and locally constant potentials have zero
//! variation there. The estimators below therefore evaluate the finite-`n`
//! pressure sums exactly, with no `ε` left to send to zero.
//!
//! Birkhoff sums use cyclic windows for depth-1 potentials, so each word's
//! average is the integral of its periodic-orbit measure. Deeper potentials
//! use the `n − depth + 1` full windows of the word (cyclic windows of a
//! deeper potential need not be admissible).

mod cylinder;
mod katok;
mod oracle;

pub use cylinder::{level_set_pressure_estimate, separated_pressure_estimate};
pub use katok::{katok_entropy_estimate, katok_entropy_by_types};
pub use oracle::{brute_force_constrained, ORACLE_MAX_SYMBOLS};

use crate::symbolic::{Potential, SftSystem, DEFAULT_WORD_CAP};

/// Result of a finite-`n` estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateReport {
    pub n: usize,
    /// Level-set tolerance; `None` for estimates without a level constraint.
    pub delta: Option<f64>,
    /// `None` when no word contributed (the `−∞` of an empty sum).
    pub value: Option<f64>,
    /// Words contributing to the sum (saturating).
    pub word_count: u128,
    /// The value is the exact finite-`n` quantity (not a bound or sample).
    pub exact: bool,
    /// `[lower, upper]` enclosing the exact value when it is not attained.
    pub bounds: Option<(f64, f64)>,
}

impl EstimateReport {
    pub fn is_empty(&self) -> bool {
        self.value.is_none()
    }

    /// The value with the empty state mapped to `−∞`.
    pub fn value_or_neg_inf(&self) -> f64 {
        self.value.unwrap_or(f64::NEG_INFINITY)
    }
}

/// Configuration shared by the enumerating estimators.
#[derive(Debug, Clone, Copy)]
pub struct Enumeration {
    /// Refuse to enumerate when `alphabet_size^n` exceeds this.
    pub word_cap: u64,
}

impl Default for Enumeration {
    fn default() -> Self {
        Enumeration { word_cap: DEFAULT_WORD_CAP }
    }
}

/// Running `log Σ exp(xᵢ)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LogSumExp {
    max: f64,
    sum: f64,
}

impl LogSumExp {
    pub(crate) fn new() -> Self {
        LogSumExp { max: f64::NEG_INFINITY, sum: 0.0 }
    }

    pub(crate) fn add(&mut self, x: f64) {
        self.add_weighted(x, 1.0);
    }

    /// Adds `weight · exp(x)`.
    pub(crate) fn add_weighted(&mut self, x: f64, weight: f64) {
        if weight <= 0.0 {
            return;
        }
        if x > self.max {
            self.sum = self.sum * (self.max - x).exp() + weight;
            self.max = x;
        } else {
            self.sum += weight * (x - self.max).exp();
        }
    }

    pub(crate) fn value(&self) -> Option<f64> {
        (self.sum > 0.0).then(|| self.max + self.sum.ln())
    }
}

/// Depth-first walk over admissible `n`-words carrying incremental Birkhoff
/// sums of each potential. `visit` receives the word and the sums.
pub(crate) fn for_each_word(
    sft: &SftSystem,
    n: usize,
    potentials: &[&Potential],
    mut visit: impl FnMut(&[usize], &[f64]),
) {
    struct Walk<'a, F> {
        sft: &'a SftSystem,
        n: usize,
        pots: &'a [&'a Potential],
        word: Vec<usize>,
        // sums[level][p]: sum of potential p over windows ending before `level`
        sums: Vec<Vec<f64>>,
        visit: F,
    }

    impl<F: FnMut(&[usize], &[f64])> Walk<'_, F> {
        fn push(&mut self, s: usize) {
            let len = self.word.len();
            self.word.push(s);
            for (p, pot) in self.pots.iter().enumerate() {
                let k = pot.depth();
                let mut v = self.sums[len][p];
                if len + 1 >= k {
                    v += pot.value(&self.word[len + 1 - k..]).expect("admissible window");
                }
                self.sums[len + 1][p] = v;
            }
        }

        fn go(&mut self) {
            let len = self.word.len();
            if len == self.n {
                (self.visit)(&self.word, &self.sums[len]);
                return;
            }
            let last = *self.word.last().unwrap();
            for s in self.sft.successors(last).collect::<Vec<_>>() {
                self.push(s);
                self.go();
                self.word.pop();
            }
        }
    }

    let mut walk = Walk {
        sft,
        n,
        pots: potentials,
        word: Vec::with_capacity(n),
        sums: vec![vec![0.0; potentials.len()]; n + 1],
        visit: &mut visit,
    };
    for s in 0..sft.alphabet_size() {
        walk.push(s);
        walk.go();
        walk.word.pop();
    }
}

/// Number of windows a Birkhoff sum of `p` has on an `n`-word.
pub(crate) fn window_count(p: &Potential, n: usize) -> usize {
    n + 1 - p.depth()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::{admissible_words, Word};

    #[test]
    fn log_sum_exp_is_stable() {
        let mut acc = LogSumExp::new();
        for x in [1000.0, 1000.0, -1e9] {
            acc.add(x);
        }
        assert!((acc.value().unwrap() - (1000.0 + 2f64.ln())).abs() < 1e-12);
        assert_eq!(LogSumExp::new().value(), None);
    }

    #[test]
    fn walk_matches_birkhoff_sums() {
        let sft = SftSystem::golden_mean();
        let a = Potential::from_symbol_values(&sft, &[0.25, -1.0]).unwrap();
        let b = Potential::from_fn(&sft, 2, |w| (w[0] * 3 + w[1]) as f64).unwrap();
        let mut seen = Vec::new();
        for_each_word(&sft, 6, &[&a, &b], |w, sums| {
            let word = Word::new(&sft, w.to_vec()).unwrap();
            assert_eq!(sums[0], a.birkhoff_sum(&word, true).unwrap());
            assert_eq!(sums[1], b.birkhoff_sum(&word, false).unwrap());
            seen.push(word);
        });
        assert_eq!(seen, admissible_words(&sft, 6).unwrap());
    }
}
