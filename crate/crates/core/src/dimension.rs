//! Hausdorff dimension of Birkhoff level sets for piecewise linear,
//! full-branch, uniformly expanding maps of the unit interval.
//!
//! Coding by branches conjugates such a map to the full shift on its
//! branches, with `ψ = log |f'|` depth 1. The dimension of
//! `{x : (1/n)S_nφ(x) → α}` is the zero `d` of
//! `s ↦ F_α(−sψ) = sup { h_μ − s∫ψ dμ : ∫φ dμ = α }`, equivalently
//! `sup { h_μ / ∫ψ dμ : ∫φ dμ = α }`. Because every slope exceeds 1 the map
//! `s ↦ F_α(−sψ)` is strictly decreasing and the zero is unique.
//!
//! Maps with a parabolic fixed point (`f' = 1` there, as in the
//! Manneville–Pomeau family) are outside this class: at the level of the
//! parabolic point the pressure vanishes identically and the zero is not
//! unique. Such maps are rejected at construction.

use crate::error::{Error, Result};
use crate::pressure::pressure;
use crate::roots::{brent, RootOptions};
use crate::spectra::{DualProblem, DualityOptions};
use crate::symbolic::{Potential, SftSystem};

const EDGE_TOL: f64 = 1e-12;
const SIGN_TOL: f64 = 1e-12;

/// One affine branch mapping `[left, right]` onto `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Branch {
    pub left: f64,
    pub right: f64,
    /// `|f'|` on the branch.
    pub slope: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntervalMapModel {
    branches: Vec<Branch>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionResult {
    pub alpha: f64,
    pub dim: f64,
    /// `F_α(−dim·ψ)`, re-evaluated at the returned root.
    pub residual: f64,
    /// The zero of `s ↦ F_α(−sψ)` is unique (always the case for expanding
    /// maps); otherwise `dim` is the infimum of the zero set.
    pub unique_zero: bool,
}

impl IntervalMapModel {
    pub fn new(branches: Vec<Branch>) -> Result<Self> {
        let invalid = |invariant, message: String| Error::InvalidModel { invariant, message };
        if branches.is_empty() {
            return Err(invalid("partition", "no branches".into()));
        }
        for (i, b) in branches.iter().enumerate() {
            if !(b.slope.is_finite() && b.slope > 1.0) {
                return Err(invalid(
                    "expansion",
                    format!("branch {i} has slope {} (need > 1)", b.slope),
                ));
            }
            if !(b.left.is_finite() && b.right.is_finite() && b.right > b.left) {
                return Err(invalid("partition", format!("branch {i} has empty interval")));
            }
            let len = b.right - b.left;
            if (len - 1.0 / b.slope).abs() > EDGE_TOL {
                return Err(invalid(
                    "full-branch",
                    format!("branch {i} has length {len} but slope {} needs {}", b.slope, 1.0 / b.slope),
                ));
            }
        }
        if branches[0].left.abs() > EDGE_TOL || (branches.last().unwrap().right - 1.0).abs() > EDGE_TOL {
            return Err(invalid("partition", "branches must start at 0 and end at 1".into()));
        }
        for (i, pair) in branches.windows(2).enumerate() {
            if (pair[0].right - pair[1].left).abs() > EDGE_TOL {
                return Err(invalid(
                    "partition",
                    format!("gap or overlap between branches {i} and {}", i + 1),
                ));
            }
        }
        Ok(IntervalMapModel { branches })
    }

    /// Consecutive branches of lengths `1/slopes[i]` starting at 0.
    pub fn from_slopes(slopes: &[f64]) -> Result<Self> {
        let mut left = 0.0;
        let branches = slopes
            .iter()
            .map(|&slope| {
                let b = Branch { left, right: left + 1.0 / slope, slope };
                left = b.right;
                b
            })
            .collect();
        Self::new(branches)
    }

    pub fn doubling() -> Self {
        Self::from_slopes(&[2.0, 2.0]).expect("doubling map is valid")
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn slopes(&self) -> Vec<f64> {
        self.branches.iter().map(|b| b.slope).collect()
    }
}

/// The coding: full shift on the branches and `ψ(i) = log slope_i`.
pub fn symbolic_model(map: &IntervalMapModel) -> Result<(SftSystem, Potential)> {
    let sft = SftSystem::full_shift(map.branches.len())?;
    let logs: Vec<f64> = map.branches.iter().map(|b| b.slope.ln()).collect();
    let psi = Potential::from_symbol_values(&sft, &logs)?;
    Ok((sft, psi))
}

/// The zero of `s ↦ P(−sψ)`: the dimension of the whole repeller
/// (here `1`, since full branches cover the interval), equivalently the
/// solution of the Moran equation `Σ slope_i^{−s} = 1`.
pub fn full_dimension(map: &IntervalMapModel) -> Result<f64> {
    let (sft, psi) = symbolic_model(map)?;
    let p = |s: f64| pressure(&sft, &psi.scaled(-s));
    let (p0, p1) = (p(0.0)?, p(1.0)?);
    let opts = RootOptions { x_tol: 1e-15, f_tol: 1e-15, max_iter: 200 };
    if p1 >= -SIGN_TOL {
        return Ok(1.0);
    }
    Ok(brent(p, 0.0, 1.0, p0, p1, opts)?.x)
}

struct LevelProblem {
    sft: SftSystem,
    phi: Potential,
    psi: Potential,
}

impl LevelProblem {
    fn new(map: &IntervalMapModel, phi: &Potential) -> Result<Self> {
        let (sft, psi) = symbolic_model(map)?;
        phi.check_host(&sft)?;
        Ok(LevelProblem { sft, phi: phi.clone(), psi })
    }

    fn pressure_at(&self, alpha: f64, s: f64) -> Result<f64> {
        let problem =
            DualProblem::new(&self.sft, &self.phi, &self.psi.scaled(-s), DualityOptions::default())?;
        Ok(problem.solve(alpha, None)?.0.value)
    }

    fn dimension(&self, alpha: f64) -> Result<DimensionResult> {
        let f = |s: f64| self.pressure_at(alpha, s);
        let f0 = f(0.0)?;
        if f0 < -SIGN_TOL {
            return Err(Error::NoSignChange(format!("F_alpha(0) = {f0} < 0")));
        }
        if f0 <= SIGN_TOL {
            return Ok(DimensionResult { alpha, dim: 0.0, residual: f0, unique_zero: true });
        }
        let f1 = f(1.0)?;
        if f1 > SIGN_TOL {
            return Err(Error::NoSignChange(format!(
                "F_alpha(-psi) = {f1} > 0; dimension would exceed 1"
            )));
        }
        if f1 >= -SIGN_TOL {
            return Ok(DimensionResult { alpha, dim: 1.0, residual: f1, unique_zero: true });
        }
        let opts = RootOptions { x_tol: 1e-14, f_tol: 1e-13, max_iter: 200 };
        let root = brent(f, 0.0, 1.0, f0, f1, opts)?;
        let residual = self.pressure_at(alpha, root.x)?;
        Ok(DimensionResult { alpha, dim: root.x, residual, unique_zero: true })
    }
}

/// `dim_H {x : (1/n)S_nφ(x) → α}` by the Bowen-type equation
/// `F_α(−d·ψ) = 0`.
pub fn level_set_dimension(
    map: &IntervalMapModel,
    phi: &Potential,
    alpha: f64,
) -> Result<DimensionResult> {
    LevelProblem::new(map, phi)?.dimension(alpha)
}

/// Level-set dimensions on a uniform grid over `L_φ`.
pub fn dimension_spectrum(
    map: &IntervalMapModel,
    phi: &Potential,
    grid_size: usize,
) -> Result<Vec<DimensionResult>> {
    if grid_size < 2 {
        return Err(Error::InvalidParameter(format!("grid size {grid_size} < 2")));
    }
    let problem = LevelProblem::new(map, phi)?;
    let domain = crate::symbolic::spectrum_domain(&problem.sft, phi)?;
    domain.grid(grid_size).into_iter().map(|a| problem.dimension(a)).collect()
}
