use super::{Potential, SftSystem};
use crate::error::{Error, Result};
use crate::linalg::{stationary_gth, Matrix};

const ROW_TOL: f64 = 1e-12;
const STATIONARY_TOL: f64 = 1e-12;

/// A shift-invariant (one-step) Markov measure on an SFT.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovMeasure {
    stochastic: Matrix,
    stationary: Vec<f64>,
    entropy: f64,
}

impl MarkovMeasure {
    /// Builds the measure from a stochastic matrix supported on the allowed
    /// transitions. The chain must be irreducible on its support so that the
    /// stationary vector is unique.
    pub fn new(sft: &SftSystem, stochastic: Vec<Vec<f64>>) -> Result<Self> {
        let p = Self::check_stochastic(sft, stochastic)?;
        let stationary = stationary_gth(&p).ok_or_else(|| {
            Error::InvalidMeasure("chain is reducible; stationary vector is not unique".into())
        })?;
        Self::assemble(p, stationary)
    }

    /// Builds the measure from explicit stochastic matrix and stationary vector.
    pub fn with_stationary(
        sft: &SftSystem,
        stochastic: Vec<Vec<f64>>,
        stationary: Vec<f64>,
    ) -> Result<Self> {
        let p = Self::check_stochastic(sft, stochastic)?;
        if stationary.len() != p.dim() {
            return Err(Error::InvalidMeasure("stationary vector has wrong length".into()));
        }
        Self::assemble(p, stationary)
    }

    /// Product measure on a full shift.
    pub fn bernoulli(sft: &SftSystem, probs: &[f64]) -> Result<Self> {
        let n = sft.alphabet_size();
        if probs.len() != n {
            return Err(Error::InvalidMeasure(format!("{} weights for {n} symbols", probs.len())));
        }
        if sft.edge_count() != n * n {
            return Err(Error::InvalidMeasure("Bernoulli measures need a full shift".into()));
        }
        let rows = vec![probs.to_vec(); n];
        Self::with_stationary(sft, rows, probs.to_vec())
    }

    fn check_stochastic(sft: &SftSystem, rows: Vec<Vec<f64>>) -> Result<Matrix> {
        let n = sft.alphabet_size();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMeasure(format!("stochastic matrix must be {n}x{n}")));
        }
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if !(v >= 0.0 && v.is_finite()) {
                    return Err(Error::InvalidMeasure(format!("entry ({i}, {j}) = {v}")));
                }
                if v > 0.0 && !sft.allowed(i, j) {
                    return Err(Error::InvalidMeasure(format!(
                        "mass on forbidden transition {i} -> {j}"
                    )));
                }
            }
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > ROW_TOL {
                return Err(Error::InvalidMeasure(format!("row {i} sums to {s}")));
            }
        }
        Ok(Matrix::from_rows(&rows))
    }

    fn assemble(p: Matrix, stationary: Vec<f64>) -> Result<Self> {
        if stationary.iter().any(|&x| !(x >= 0.0 && x.is_finite())) {
            return Err(Error::InvalidMeasure("stationary vector has invalid entries".into()));
        }
        let total: f64 = stationary.iter().sum();
        if (total - 1.0).abs() > STATIONARY_TOL {
            return Err(Error::InvalidMeasure(format!("stationary vector sums to {total}")));
        }
        let n = p.dim();
        for j in 0..n {
            let flow: f64 = (0..n).map(|i| stationary[i] * p[(i, j)]).sum();
            if (flow - stationary[j]).abs() > STATIONARY_TOL {
                return Err(Error::InvalidMeasure(format!(
                    "stationary vector is not invariant at symbol {j} (defect {:e})",
                    flow - stationary[j]
                )));
            }
        }
        let entropy = -(0..n)
            .map(|i| {
                stationary[i]
                    * p.row(i).iter().filter(|&&x| x > 0.0).map(|&x| x * x.ln()).sum::<f64>()
            })
            .sum::<f64>();
        Ok(MarkovMeasure { stochastic: p, stationary, entropy: entropy.max(0.0) })
    }

    pub fn stochastic(&self) -> &Matrix {
        &self.stochastic
    }

    pub fn stationary(&self) -> &[f64] {
        &self.stationary
    }

    /// Kolmogorov–Sinai entropy in nats.
    pub fn entropy(&self) -> f64 {
        self.entropy
    }

    pub fn alphabet_size(&self) -> usize {
        self.stationary.len()
    }

    /// `μ[w]`, the measure of the cylinder of `symbols`.
    pub fn cylinder(&self, symbols: &[usize]) -> f64 {
        let Some(&first) = symbols.first() else {
            return 1.0;
        };
        symbols
            .windows(2)
            .fold(self.stationary[first], |acc, w| acc * self.stochastic[(w[0], w[1])])
    }

    /// `∫φ dμ` for a potential of any depth.
    pub fn integral(&self, potential: &Potential) -> f64 {
        match potential.depth() {
            1 => potential
                .entries()
                .map(|(w, v)| self.stationary[w[0]] * v)
                .sum(),
            _ => potential.entries().map(|(w, v)| self.cylinder(&w) * v).sum(),
        }
    }

    /// `h_μ + ∫ψ dμ`, the free energy of the measure for `ψ`.
    pub fn free_energy(&self, potential: &Potential) -> f64 {
        self.entropy + self.integral(potential)
    }
}
