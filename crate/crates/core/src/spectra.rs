//! Pressure of Birkhoff level sets by Legendre duality.
//!
//! For `α` in the interior of `L_φ`,
//!
//! ```text
//! F(α) = sup { h_μ + ∫ψ dμ : ∫φ dμ = α } = inf_q [ P(ψ + qφ) − qα ],
//! ```
//!
//! and the infimum is attained where `dP/dq = ∫φ dμ_{ψ+qφ} = α`, with the
//! equilibrium state of `ψ + q·φ` as maximizing measure. At the endpoints of
//! `L_φ` the tilted family degenerates (`q → ±∞`); there the supremum is
//! taken over measures supported on the extremal-mean-cycle subgraph of
//! `φ`, whose pressure is computed directly.

use crate::error::{Error, Result};
use crate::pressure::{measure_from_perron, perron_pressure, restricted_pressure};
use crate::roots::{brent, RootOptions};
use crate::symbolic::cycles::{edge_weights, ExtremalCycles, Extremum};
use crate::symbolic::{higher_block_recode, spectrum_domain, Interval, MarkovMeasure, Potential, SftSystem};

/// Solver settings for the duality root-find.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualityOptions {
    /// Stop when `|∫φ dμ_q − α|` is below this.
    pub gradient_tol: f64,
    /// Absolute slack when testing `α ∈ L_φ` and snapping to endpoints.
    pub domain_slack: f64,
    /// The bracket grows through `±2^k`, `k <= max_expansion`.
    pub max_expansion: u32,
}

impl Default for DualityOptions {
    fn default() -> Self {
        DualityOptions { gradient_tol: 1e-11, domain_slack: 1e-9, max_expansion: 60 }
    }
}

/// `F(α)` together with its dual parameter and maximizing measure.
#[derive(Debug, Clone)]
pub struct ConstrainedPressure {
    pub alpha: f64,
    pub value: f64,
    /// Optimal dual parameter; `±∞` at the endpoints of the domain.
    pub q_opt: f64,
    /// Equilibrium state of `ψ + q_opt·φ` (on the depth-2 presentation of
    /// the system); absent at the endpoints.
    pub witness: Option<MarkovMeasure>,
    /// Set when `α` is an endpoint of `L_φ` and the value was computed on
    /// the extremal-cycle subgraph instead of by duality.
    pub boundary: bool,
}

/// `α ↦ F(α)` sampled over `L_φ`.
#[derive(Debug, Clone)]
pub struct SpectrumCurve {
    pub points: Vec<ConstrainedPressure>,
    pub domain: Interval,
    /// `P(ψ)`, the maximum of the curve.
    pub psi_pressure: f64,
}

/// `α* = ∫φ dμ_ψ` for the equilibrium state of `ψ`, where the level set
/// carries full pressure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FullPressurePoint {
    pub alpha_star: f64,
    /// `F(α*)`.
    pub value: f64,
    /// `P(ψ)`.
    pub pressure: f64,
    /// `|F(α*) − P(ψ)|`.
    pub check: f64,
}

impl FullPressurePoint {
    pub fn passes(&self) -> bool {
        self.check <= 1e-8
    }
}

/// Everything that does not depend on `α`: the common depth-2
/// presentation of `φ`, `ψ` and the spectrum domain.
#[derive(Debug, Clone)]
pub(crate) struct DualProblem {
    sft: SftSystem,
    phi: Potential,
    psi: Potential,
    domain: Interval,
    opts: DualityOptions,
}

struct Bracket {
    lo: f64,
    hi: f64,
    g_lo: f64,
    g_hi: f64,
    exponent: u32,
}

impl DualProblem {
    pub(crate) fn new(
        sft: &SftSystem,
        phi: &Potential,
        psi: &Potential,
        opts: DualityOptions,
    ) -> Result<Self> {
        let r = higher_block_recode(sft, &[phi.clone(), psi.clone()])?;
        let mut pots = r.potentials.into_iter();
        let (phi, psi) = (pots.next().unwrap(), pots.next().unwrap());
        let domain = spectrum_domain(&r.sft, &phi)?;
        Ok(DualProblem { sft: r.sft, phi, psi, domain, opts })
    }

    pub(crate) fn domain(&self) -> Interval {
        self.domain
    }

    fn tilted(&self, q: f64) -> Result<Potential> {
        Potential::linear_combination(&self.sft, &[(1.0, &self.psi), (q, &self.phi)])
    }

    /// `(P(ψ + qφ), ∫φ dμ_q, μ_q)`.
    fn evaluate(&self, q: f64) -> Result<(f64, f64, MarkovMeasure)> {
        let t = self.tilted(q)?;
        let res = perron_pressure(&edge_weights(&self.sft, &t), self.sft.primitivity_power())?;
        let mu = measure_from_perron(&self.sft, &res)?;
        let grad = mu.integral(&self.phi);
        Ok((res.value, grad, mu))
    }

    fn gradient(&self, q: f64) -> Result<f64> {
        self.evaluate(q).map(|(_, g, _)| g)
    }

    pub(crate) fn psi_pressure(&self) -> Result<f64> {
        self.evaluate(0.0).map(|(p, _, _)| p)
    }

    pub(crate) fn solve(&self, alpha: f64, hint: Option<u32>) -> Result<(ConstrainedPressure, Option<u32>)> {
        let d = self.domain;
        let slack = self.opts.domain_slack;
        if !alpha.is_finite() || !d.contains(alpha, slack) {
            return Err(Error::AlphaOutOfDomain { alpha, min: d.min, max: d.max });
        }
        if d.is_degenerate() {
            let (value, _, mu) = self.evaluate(0.0)?;
            return Ok((
                ConstrainedPressure { alpha, value, q_opt: 0.0, witness: Some(mu), boundary: false },
                None,
            ));
        }
        if alpha <= d.min + slack {
            return Ok((self.boundary(alpha, Extremum::Min)?, None));
        }
        if alpha >= d.max - slack {
            return Ok((self.boundary(alpha, Extremum::Max)?, None));
        }

        let (p0, g0, mu0) = self.evaluate(0.0)?;
        if (g0 - alpha).abs() <= self.opts.gradient_tol {
            return Ok((
                ConstrainedPressure { alpha, value: p0, q_opt: 0.0, witness: Some(mu0), boundary: false },
                None,
            ));
        }
        let sign = if g0 < alpha { 1.0 } else { -1.0 };
        let Some(bracket) = self.bracket(alpha, sign, g0 - alpha, hint)? else {
            // The tilt needed exceeds 2^max_expansion: treat as an endpoint.
            let ext = if sign > 0.0 { Extremum::Max } else { Extremum::Min };
            return Ok((self.boundary(alpha, ext)?, None));
        };
        let opts = RootOptions { x_tol: 0.0, f_tol: self.opts.gradient_tol, max_iter: 300 };
        let root = brent(
            |q| Ok(self.gradient(q)? - alpha),
            bracket.lo,
            bracket.hi,
            bracket.g_lo,
            bracket.g_hi,
            opts,
        )?;
        let q = root.x;
        let (p, _, mu) = self.evaluate(q)?;
        Ok((
            ConstrainedPressure {
                alpha,
                value: p - q * alpha,
                q_opt: q,
                witness: Some(mu),
                boundary: false,
            },
            Some(bracket.exponent),
        ))
    }

    /// The canonical bracket `[sign·2^(k−1), sign·2^k]` (or `[0, sign]` for
    /// `k = 0`) with `k` the smallest exponent at which the shifted
    /// gradient changes sign. A hint from a neighbouring grid point is
    /// verified before use, so the bracket never depends on it.
    fn bracket(&self, alpha: f64, sign: f64, g0: f64, hint: Option<u32>) -> Result<Option<Bracket>> {
        let at = |k: u32| -> Result<(f64, f64)> {
            let q = sign * 2f64.powi(k as i32);
            Ok((q, self.gradient(q)? - alpha))
        };
        let crossed = |g: f64| sign * g >= 0.0;
        let make = |k: u32, lo: (f64, f64), hi: (f64, f64)| {
            let ((a, ga), (b, gb)) = if sign > 0.0 { (lo, hi) } else { (hi, lo) };
            Bracket { lo: a, hi: b, g_lo: ga, g_hi: gb, exponent: k }
        };

        if let Some(k) = hint.filter(|&k| k <= self.opts.max_expansion) {
            let hi = at(k)?;
            if crossed(hi.1) {
                let lo = if k == 0 { (0.0, g0) } else { at(k - 1)? };
                if !crossed(lo.1) {
                    return Ok(Some(make(k, lo, hi)));
                }
            }
        }
        let mut prev = (0.0, g0);
        for k in 0..=self.opts.max_expansion {
            let cur = at(k)?;
            if crossed(cur.1) {
                return Ok(Some(make(k, prev, cur)));
            }
            prev = cur;
        }
        Ok(None)
    }

    fn boundary(&self, alpha: f64, ext: Extremum) -> Result<ConstrainedPressure> {
        let cycles = ExtremalCycles::analyse(&edge_weights(&self.sft, &self.phi), ext);
        let value = restricted_pressure(&edge_weights(&self.sft, &self.psi), &cycles.subgraph)?
            .expect("the extremal subgraph contains a cycle");
        let q_opt = match ext {
            Extremum::Min => f64::NEG_INFINITY,
            Extremum::Max => f64::INFINITY,
        };
        Ok(ConstrainedPressure { alpha, value, q_opt, witness: None, boundary: true })
    }
}

/// `F(α) = sup { h_μ + ∫ψ dμ : ∫φ dμ = α }`.
pub fn constrained_pressure(
    sft: &SftSystem,
    phi: &Potential,
    psi: &Potential,
    alpha: f64,
) -> Result<ConstrainedPressure> {
    constrained_pressure_with(sft, phi, psi, alpha, DualityOptions::default())
}

pub fn constrained_pressure_with(
    sft: &SftSystem,
    phi: &Potential,
    psi: &Potential,
    alpha: f64,
    opts: DualityOptions,
) -> Result<ConstrainedPressure> {
    DualProblem::new(sft, phi, psi, opts)?.solve(alpha, None).map(|(c, _)| c)
}

/// `F` on a uniform grid of `grid_size` points over `L_φ`, endpoints
/// included. Neighbouring points pass their bracket exponent along as a
/// hint; the result is identical to evaluating each point on its own.
pub fn spectrum_curve(
    sft: &SftSystem,
    phi: &Potential,
    psi: &Potential,
    grid_size: usize,
) -> Result<SpectrumCurve> {
    spectrum_curve_with(sft, phi, psi, grid_size, DualityOptions::default())
}

pub fn spectrum_curve_with(
    sft: &SftSystem,
    phi: &Potential,
    psi: &Potential,
    grid_size: usize,
    opts: DualityOptions,
) -> Result<SpectrumCurve> {
    if grid_size < 2 {
        return Err(Error::InvalidParameter(format!("grid size {grid_size} < 2")));
    }
    let problem = DualProblem::new(sft, phi, psi, opts)?;
    let domain = problem.domain();
    let mut hint = None;
    let mut points = Vec::with_capacity(grid_size);
    for alpha in domain.grid(grid_size) {
        let (point, used) = problem.solve(alpha, hint)?;
        if used.is_some() {
            hint = used;
        }
        points.push(point);
    }
    Ok(SpectrumCurve { points, domain, psi_pressure: problem.psi_pressure()? })
}

/// The level `α* = ∫φ dμ_ψ` of the equilibrium state of `ψ`, and the check
/// that `F(α*) = P(ψ)` there.
pub fn full_pressure_point(
    sft: &SftSystem,
    phi: &Potential,
    psi: &Potential,
) -> Result<FullPressurePoint> {
    let problem = DualProblem::new(sft, phi, psi, DualityOptions::default())?;
    let (pressure, alpha_star, _) = problem.evaluate(0.0)?;
    let (point, _) = problem.solve(alpha_star, None)?;
    Ok(FullPressurePoint {
        alpha_star,
        value: point.value,
        pressure,
        check: (point.value - pressure).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binary_entropy(a: f64) -> f64 {
        if a <= 0.0 || a >= 1.0 {
            return 0.0;
        }
        -a * a.ln() - (1.0 - a) * (1.0 - a).ln()
    }

    fn full2() -> (SftSystem, Potential, Potential) {
        let sft = SftSystem::full_shift(2).unwrap();
        let phi = Potential::indicator(&sft, 1);
        let zero = Potential::zero(&sft);
        (sft, phi, zero)
    }

    #[test]
    fn binary_entropy_at_point_three() {
        let (sft, phi, zero) = full2();
        let c = constrained_pressure(&sft, &phi, &zero, 0.3).unwrap();
        assert!((c.value - binary_entropy(0.3)).abs() < 1e-10);
        assert!((c.value - 0.610864).abs() < 1e-6);
        // q solves e^q/(1+e^q) = 0.3
        assert!((c.q_opt - (0.3f64 / 0.7).ln()).abs() < 1e-8);
        let w = c.witness.unwrap();
        assert!((w.integral(&phi) - 0.3).abs() < 1e-8);
        assert!((w.entropy() - c.value).abs() < 1e-8);
    }

    #[test]
    fn centre_and_endpoints() {
        let (sft, phi, zero) = full2();
        let mid = constrained_pressure(&sft, &phi, &zero, 0.5).unwrap();
        assert!((mid.value - 2f64.ln()).abs() < 1e-12);
        assert!(!mid.boundary);
        let lo = constrained_pressure(&sft, &phi, &zero, 0.0).unwrap();
        assert!(lo.boundary && lo.value.abs() < 1e-14 && lo.q_opt == f64::NEG_INFINITY);
        let hi = constrained_pressure(&sft, &phi, &zero, 1.0).unwrap();
        assert!(hi.boundary && hi.value.abs() < 1e-14 && hi.q_opt == f64::INFINITY);
    }

    #[test]
    fn psi_equal_phi_shifts_by_alpha() {
        let (sft, phi, _) = full2();
        let c = constrained_pressure(&sft, &phi, &phi, 0.3).unwrap();
        assert!((c.value - 0.910864).abs() < 1e-6);
        assert!((c.value - (binary_entropy(0.3) + 0.3)).abs() < 1e-10);
    }

    #[test]
    fn out_of_domain() {
        let (sft, phi, zero) = full2();
        for a in [-0.1, 1.0 + 1e-6, f64::NAN] {
            assert!(matches!(
                constrained_pressure(&sft, &phi, &zero, a),
                Err(Error::AlphaOutOfDomain { .. })
            ));
        }
        // within the endpoint slack
        assert!(constrained_pressure(&sft, &phi, &zero, 1.0 + 5e-10).unwrap().boundary);
    }

    #[test]
    fn golden_mean_upper_endpoint_is_periodic_orbit() {
        let sft = SftSystem::golden_mean();
        let phi = Potential::indicator(&sft, 1);
        let c = constrained_pressure(&sft, &phi, &Potential::zero(&sft), 0.5).unwrap();
        assert!(c.boundary && c.value.abs() < 1e-13);
        // close to the endpoint the duality route still works
        let near = constrained_pressure(&sft, &phi, &Potential::zero(&sft), 0.5 - 1e-6).unwrap();
        assert!(!near.boundary && near.value > 0.0 && near.value < 1e-4);
    }

    #[test]
    fn constant_phi_is_degenerate() {
        let sft = SftSystem::golden_mean();
        let phi = Potential::constant(&sft, 2.0);
        let psi = Potential::indicator(&sft, 0);
        let curve = spectrum_curve(&sft, &phi, &psi, 9).unwrap();
        assert_eq!(curve.points.len(), 1);
        assert!((curve.points[0].value - curve.psi_pressure).abs() < 1e-14);
        assert_eq!(curve.points[0].alpha, 2.0);
    }

    #[test]
    fn curve_matches_binary_entropy() {
        let (sft, phi, zero) = full2();
        let curve = spectrum_curve(&sft, &phi, &zero, 11).unwrap();
        assert_eq!(curve.points.len(), 11);
        for (i, p) in curve.points.iter().enumerate() {
            assert!((p.alpha - i as f64 / 10.0).abs() < 1e-15);
            assert!((p.value - binary_entropy(p.alpha)).abs() < 1e-10, "{}", p.alpha);
        }
        assert!((curve.points[5].value - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn hints_do_not_change_results() {
        let sft = SftSystem::new(&[vec![1, 1, 1], vec![1, 0, 1], vec![0, 1, 1]]).unwrap();
        let phi = Potential::from_symbol_values(&sft, &[0.3, -1.1, 2.0]).unwrap();
        let psi = Potential::from_symbol_values(&sft, &[0.5, 0.0, -0.4]).unwrap();
        let curve = spectrum_curve(&sft, &phi, &psi, 17).unwrap();
        for p in &curve.points {
            let cold = constrained_pressure(&sft, &phi, &psi, p.alpha).unwrap();
            assert_eq!(cold.value.to_bits(), p.value.to_bits());
            assert_eq!(cold.q_opt.to_bits(), p.q_opt.to_bits());
        }
    }

    #[test]
    fn full_pressure_points() {
        let (sft, phi, zero) = full2();
        let a = full_pressure_point(&sft, &phi, &zero).unwrap();
        assert!((a.alpha_star - 0.5).abs() < 1e-14 && a.passes());
        let b = full_pressure_point(&sft, &phi, &phi).unwrap();
        let e = 1f64.exp();
        assert!((b.alpha_star - e / (1.0 + e)).abs() < 1e-12);
        assert!((b.value - (1.0 + e).ln()).abs() < 1e-10 && b.passes());
        let gm = SftSystem::golden_mean();
        let c = full_pressure_point(&gm, &Potential::indicator(&gm, 1), &Potential::zero(&gm)).unwrap();
        let g = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((c.alpha_star - 1.0 / (1.0 + g * g)).abs() < 1e-12);
        assert!((c.alpha_star - 0.276393).abs() < 1e-6);
        assert!(c.passes());
    }
}
