//! Suspension flows over mixing SFTs.
//!
//! A flow under the roof `ρ > 0` is described by its base system, the roof,
//! and the fiber-integrated observable `φ(x) = ∫₀^{ρ(x)} Φ(x,t) dt`. Flow
//! averages of `Φ` are ratios `S_nφ / S_nρ` on the base, flow-invariant
//! measures correspond to base measures `μ ↦ μ_ρ`, and Abramov's formula
//! `h(μ_ρ) = h_μ / ∫ρ dμ` turns every flow quantity into a root-find over
//! base pressures.
//!
//! The computations run on one-sided shifts. Entropies and integrals agree
//! with those of the natural extension, so the invertibility assumed for
//! the flow plays no role in the numbers.

use crate::error::{Error, Result};
use crate::pressure::{equilibrium_measure, pressure};
use crate::roots::{brent, RootOptions};
use crate::spectra::{ConstrainedPressure, DualProblem, DualityOptions};
use crate::symbolic::cycles::{edge_weights, ExtremalCycles, Extremum};
use crate::symbolic::{higher_block_recode, Interval, Potential, SftSystem};

#[derive(Debug, Clone)]
pub struct SuspensionSystem {
    base: SftSystem,
    roof: Potential,
    cap: Potential,
}

/// One point of the flow entropy spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowSpectrumPoint {
    pub alpha: f64,
    /// Topological entropy of the flow restricted to the level set.
    pub entropy: f64,
    /// `G(entropy)`, where `G(h) = sup{h_μ − h∫ρ dμ : ∫φ/∫ρ = α}`.
    pub residual: f64,
    /// The level set has zero entropy (`G(0) = 0`); the root-find was skipped.
    pub degenerate: bool,
}

impl SuspensionSystem {
    /// `cap` is the fiber-integrated observable `φ`.
    pub fn new(base: SftSystem, roof: Potential, cap: Potential) -> Result<Self> {
        roof.check_host(&base)?;
        cap.check_host(&base)?;
        if !(roof.min_value() > 0.0) {
            return Err(Error::InvalidPotential(format!(
                "roof must be positive, minimum is {}",
                roof.min_value()
            )));
        }
        Ok(SuspensionSystem { base, roof, cap })
    }

    /// For an observable `Φ` constant along fibers, `φ = Φ·ρ`.
    pub fn with_fiber_constant(base: SftSystem, roof: Potential, fiber: &Potential) -> Result<Self> {
        roof.check_host(&base)?;
        fiber.check_host(&base)?;
        let depth = roof.depth().max(fiber.depth());
        let (r, f) = (roof.lift(&base, depth)?, fiber.lift(&base, depth)?);
        let cap = Potential::from_fn(&base, depth, |w| r.value(w).unwrap() * f.value(w).unwrap())?;
        Self::new(base, roof, cap)
    }

    pub fn base(&self) -> &SftSystem {
        &self.base
    }

    pub fn roof(&self) -> &Potential {
        &self.roof
    }

    pub fn cap(&self) -> &Potential {
        &self.cap
    }

    /// `[min, max]` of `∫φ dμ / ∫ρ dμ` over invariant measures: the extremal
    /// cycle ratios, found by Dinkelbach iteration on `φ − αρ`.
    pub fn ratio_domain(&self) -> Result<Interval> {
        let r = higher_block_recode(&self.base, &[self.cap.clone(), self.roof.clone()])?;
        let phi = edge_weights(&r.sft, &r.potentials[0]);
        let rho = edge_weights(&r.sft, &r.potentials[1]);
        let ratio = |cycle: &[usize]| {
            let (mut num, mut den) = (0.0, 0.0);
            for i in 0..cycle.len() {
                let (u, v) = (cycle[i], cycle[(i + 1) % cycle.len()]);
                num += phi[u][v].unwrap();
                den += rho[u][v].unwrap();
            }
            num / den
        };
        let extremal = |ext: Extremum| {
            let mut alpha = ratio(&ExtremalCycles::analyse(&phi, ext).cycle());
            for _ in 0..10_000 {
                let shifted: Vec<Vec<Option<f64>>> = phi
                    .iter()
                    .zip(&rho)
                    .map(|(pr, rr)| {
                        pr.iter().zip(rr).map(|(p, r)| p.zip(*r).map(|(p, r)| p - alpha * r)).collect()
                    })
                    .collect();
                let cycles = ExtremalCycles::analyse(&shifted, ext);
                let next = ratio(&cycles.cycle());
                let improved = match ext {
                    Extremum::Max => next > alpha,
                    Extremum::Min => next < alpha,
                };
                if !improved {
                    break;
                }
                alpha = next;
            }
            alpha
        };
        let (min, max) = (extremal(Extremum::Min), extremal(Extremum::Max));
        Ok(Interval::new(min, max.max(min)))
    }

    /// Flow topological entropy `h_top`, and the level `α = ∫φ dm / ∫ρ dm`
    /// of the base equilibrium state `m` of `−h_top·ρ` (the measure of
    /// maximal entropy for the flow).
    pub fn maximal_entropy_level(&self) -> Result<(f64, f64)> {
        let h = flow_topological_entropy(self)?;
        let r = higher_block_recode(&self.base, &[self.cap.clone(), self.roof.clone()])?;
        let m = equilibrium_measure(&r.sft, &r.potentials[1].scaled(-h))?;
        Ok((m.integral(&r.potentials[0]) / m.integral(&r.potentials[1]), h))
    }

    fn shifted_problem(&self, psi: &Potential, alpha: f64) -> Result<DualProblem> {
        let shifted =
            Potential::linear_combination(&self.base, &[(1.0, &self.cap), (-alpha, &self.roof)])?;
        DualProblem::new(&self.base, &shifted, psi, DualityOptions::default())
    }

    /// Clamps `α` onto the ratio domain within the usual endpoint slack.
    fn check_alpha(&self, alpha: f64) -> Result<f64> {
        let d = self.ratio_domain()?;
        let slack = DualityOptions::default().domain_slack;
        if !alpha.is_finite() || !d.contains(alpha, slack) {
            return Err(Error::AlphaOutOfDomain { alpha, min: d.min, max: d.max });
        }
        Ok(alpha.clamp(d.min, d.max))
    }
}

/// `sup { h_μ + ∫ψ dμ : ∫φ dμ / ∫ρ dμ = α }`, via the linear constraint
/// `∫(φ − αρ) dμ = 0`.
pub fn ratio_constrained_pressure(
    sys: &SuspensionSystem,
    psi: &Potential,
    alpha: f64,
) -> Result<ConstrainedPressure> {
    let clamped = sys.check_alpha(alpha)?;
    let (mut point, _) = sys.shifted_problem(psi, clamped)?.solve(0.0, None)?;
    point.alpha = alpha;
    Ok(point)
}

/// Topological entropy of the flow on the level set `{flow average of Φ = α}`:
/// the unique `h` with `G(h) = 0`, where
/// `G(h) = sup { h_μ − h∫ρ dμ : ∫φ/∫ρ = α }` is strictly decreasing.
pub fn flow_entropy_spectrum(sys: &SuspensionSystem, alpha: f64) -> Result<FlowSpectrumPoint> {
    let clamped = sys.check_alpha(alpha)?;
    let g = |h: f64| -> Result<f64> {
        let psi = sys.roof.scaled(-h);
        Ok(sys.shifted_problem(&psi, clamped)?.solve(0.0, None)?.0.value)
    };
    let g0 = g(0.0)?;
    if g0 <= 1e-12 {
        if g0 < -1e-9 {
            return Err(Error::BracketFailure(format!("G(0) = {g0} < 0 on a nonempty level set")));
        }
        return Ok(FlowSpectrumPoint { alpha, entropy: 0.0, residual: g0, degenerate: true });
    }
    let upper = entropy_bracket(sys)?;
    let g_upper = g(upper)?;
    let opts = RootOptions { x_tol: 1e-14, f_tol: 1e-13, max_iter: 200 };
    let root = brent(g, 0.0, upper, g0, g_upper, opts)?;
    Ok(FlowSpectrumPoint { alpha, entropy: root.x, residual: root.fx, degenerate: false })
}

/// `h_top(flow)`: the root of `h ↦ P(−hρ)`.
pub fn flow_topological_entropy(sys: &SuspensionSystem) -> Result<f64> {
    let upper = entropy_bracket(sys)?;
    let p = |h: f64| pressure(&sys.base, &sys.roof.scaled(-h));
    let opts = RootOptions { x_tol: 1e-15, f_tol: 1e-14, max_iter: 200 };
    let root = brent(p, 0.0, upper, p(0.0)?, p(upper)?, opts)?;
    Ok(root.x)
}

/// `h_top(base) / min ρ + 1` bounds every Abramov quotient `h_μ / ∫ρ dμ`.
fn entropy_bracket(sys: &SuspensionSystem) -> Result<f64> {
    let base_entropy = pressure(&sys.base, &Potential::zero(&sys.base))?;
    Ok(base_entropy / sys.roof.min_value() + 1.0)
}
