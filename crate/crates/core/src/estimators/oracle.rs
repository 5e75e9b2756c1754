//! Brute-force constrained free-energy maximization, independent of the
//! pressure and duality machinery.
//!
//! Invariant measures at the transition level are the convex hull of the
//! simple-cycle measures, and the sup of `h + ∫ψ` over measures with given
//! pair frequencies is attained by the Markov chain with those frequencies.
//! So `F(α)` is the max of the Markov free energy over cycle mixtures `λ`
//! with `Σ λ_c φ̄_c = α`. The search is a grid over `λ` followed by exact
//! line searches along directions that keep both constraints.

use crate::symbolic::cycles::{edge_weights, simple_cycles};
use crate::error::{Error, Result};
use crate::symbolic::{higher_block_recode, Potential, SftSystem};

/// Largest alphabet (after recoding to depth <= 2) the oracle accepts.
pub const ORACLE_MAX_SYMBOLS: usize = 3;

const DOMAIN_SLACK: f64 = 1e-9;
const GRID_POINTS: u64 = 200_000;
const LINE_ITERATIONS: usize = 80;
const MAX_SWEEPS: usize = 2000;
const SWEEP_GAIN: f64 = 1e-14;

struct Problem {
    alphabet: usize,
    /// Allowed transitions as (from, to).
    edges: Vec<(usize, usize)>,
    psi: Vec<f64>,
    /// `flows[c][e]`: frequency of edge `e` in cycle `c`.
    flows: Vec<Vec<f64>>,
    means: Vec<f64>,
}

impl Problem {
    /// Markov free energy of the mixture `λ`.
    fn objective(&self, lambda: &[f64]) -> f64 {
        let mut p = vec![0.0; self.edges.len()];
        for (l, flow) in lambda.iter().zip(&self.flows) {
            if *l > 0.0 {
                for (pe, fe) in p.iter_mut().zip(flow) {
                    *pe += l * fe;
                }
            }
        }
        let mut out_mass = vec![0.0; self.alphabet];
        for (&(i, _), &pe) in self.edges.iter().zip(&p) {
            out_mass[i] += pe;
        }
        let mut value = 0.0;
        for (e, &(i, _)) in self.edges.iter().enumerate() {
            let pe = p[e];
            if pe > 0.0 {
                value += pe * (self.psi[e] - (pe / out_mass[i]).ln());
            }
        }
        value
    }

    fn mean(&self, lambda: &[f64]) -> f64 {
        lambda.iter().zip(&self.means).map(|(l, m)| l * m).sum()
    }

    /// Moves `λ` along the segment to the cycle whose mean lies on the far
    /// side of `α`, so that the constraint holds exactly.
    fn project(&self, lambda: &mut [f64], alpha: f64) {
        let a = self.mean(lambda);
        let target = if a < alpha {
            argmax(&self.means)
        } else if a > alpha {
            argmax(&self.means.iter().map(|m| -m).collect::<Vec<_>>())
        } else {
            return;
        };
        let gap = self.means[target] - a;
        if gap.abs() <= f64::EPSILON {
            return;
        }
        let t = ((alpha - a) / gap).clamp(0.0, 1.0);
        for l in lambda.iter_mut() {
            *l *= 1.0 - t;
        }
        lambda[target] += t;
    }

    /// Directions `d` with `Σd = 0` and `Σ d·φ̄ = 0` supported on at most
    /// three cycles.
    fn directions(&self) -> Vec<Vec<(usize, f64)>> {
        let m = self.means.len();
        let scale = self.means.iter().fold(1.0f64, |s, x| s.max(x.abs()));
        let tol = 1e-14 * scale;
        let mut out = Vec::new();
        for a in 0..m {
            for b in a + 1..m {
                if (self.means[a] - self.means[b]).abs() <= tol {
                    out.push(vec![(a, 1.0), (b, -1.0)]);
                }
                for c in b + 1..m {
                    let d = [
                        self.means[b] - self.means[c],
                        self.means[c] - self.means[a],
                        self.means[a] - self.means[b],
                    ];
                    if d.iter().all(|x| x.abs() > tol) {
                        let norm = d.iter().map(|x| x.abs()).fold(0.0, f64::max);
                        out.push(vec![(a, d[0] / norm), (b, d[1] / norm), (c, d[2] / norm)]);
                    }
                }
            }
        }
        out
    }

    /// Maximizes along `λ + t·d` within the simplex. Returns the gain.
    fn line_search(&self, lambda: &mut [f64], dir: &[(usize, f64)], current: f64) -> f64 {
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for &(k, dk) in dir {
            if dk > 0.0 {
                lo = lo.max(-lambda[k] / dk);
            } else {
                hi = hi.min(lambda[k] / -dk);
            }
        }
        if !(hi > lo) {
            return 0.0;
        }
        let mut trial = lambda.to_vec();
        let eval = |t: f64, trial: &mut Vec<f64>| {
            for &(k, dk) in dir {
                trial[k] = (lambda[k] + t * dk).max(0.0);
            }
            self.objective(trial)
        };
        let ratio = 0.5 * (5f64.sqrt() - 1.0);
        let (mut a, mut b) = (lo, hi);
        let mut x1 = b - ratio * (b - a);
        let mut x2 = a + ratio * (b - a);
        let mut f1 = eval(x1, &mut trial);
        let mut f2 = eval(x2, &mut trial);
        for _ in 0..LINE_ITERATIONS {
            if f1 < f2 {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + ratio * (b - a);
                f2 = eval(x2, &mut trial);
            } else {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - ratio * (b - a);
                f1 = eval(x1, &mut trial);
            }
        }
        let mut best = (0.0, current);
        for t in [x1, x2, lo, hi] {
            let f = eval(t, &mut trial);
            if f > best.1 {
                best = (t, f);
            }
        }
        if best.1 > current {
            for &(k, dk) in dir {
                lambda[k] = (lambda[k] + best.0 * dk).max(0.0);
            }
            best.1 - current
        } else {
            0.0
        }
    }
}

fn argmax(xs: &[f64]) -> usize {
    (0..xs.len()).fold(0, |best, i| if xs[i] > xs[best] { i } else { best })
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Calls `visit` on every composition of `total` into `parts` parts.
fn compositions(total: usize, parts: usize, visit: &mut impl FnMut(&[usize])) {
    fn go(rest: usize, slots: &mut Vec<usize>, parts: usize, visit: &mut impl FnMut(&[usize])) {
        if slots.len() + 1 == parts {
            slots.push(rest);
            visit(slots);
            slots.pop();
            return;
        }
        for k in 0..=rest {
            slots.push(k);
            go(rest - k, slots, parts, visit);
            slots.pop();
        }
    }
    go(total, &mut Vec::with_capacity(parts), parts, visit);
}

/// `sup { h_μ + ∫ψ dμ : ∫φ dμ = α }` by direct search over cycle mixtures.
///
/// The grid has step `1/resolution` on the simplex of cycle weights (coarser
/// when there are more than three cycles), keeps points whose mean is within
/// `2/resolution` of `α`, and refines the best of them.
pub fn brute_force_constrained(
    sft: &SftSystem,
    phi: &Potential,
    psi: &Potential,
    alpha: f64,
    resolution: usize,
) -> Result<f64> {
    if resolution == 0 {
        return Err(Error::InvalidParameter("resolution must be positive".into()));
    }
    let rec = higher_block_recode(sft, &[phi.clone(), psi.clone()])?;
    let a = rec.sft.alphabet_size();
    if a > ORACLE_MAX_SYMBOLS {
        return Err(Error::OracleScaleExceeded { got: a, max: ORACLE_MAX_SYMBOLS });
    }

    let phi_w = edge_weights(&rec.sft, &rec.potentials[0]);
    let psi_w = edge_weights(&rec.sft, &rec.potentials[1]);
    let edges: Vec<(usize, usize)> = (0..a)
        .flat_map(|i| rec.sft.successors(i).map(move |j| (i, j)))
        .collect();
    let edge_of = |i: usize, j: usize| edges.iter().position(|&e| e == (i, j)).expect("edge");

    let cycles = simple_cycles(&rec.sft);
    let mut flows = Vec::with_capacity(cycles.len());
    let mut means = Vec::with_capacity(cycles.len());
    for cycle in &cycles {
        let len = cycle.len() as f64;
        let mut flow = vec![0.0; edges.len()];
        let mut total = 0.0;
        for (k, &i) in cycle.iter().enumerate() {
            let j = cycle[(k + 1) % cycle.len()];
            flow[edge_of(i, j)] += 1.0 / len;
            total += phi_w[i][j].expect("allowed");
        }
        flows.push(flow);
        means.push(total / len);
    }
    let problem = Problem {
        alphabet: a,
        psi: edges.iter().map(|&(i, j)| psi_w[i][j].expect("allowed")).collect(),
        edges,
        flows,
        means,
    };

    let lo = problem.means.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = problem.means.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if alpha < lo - DOMAIN_SLACK || alpha > hi + DOMAIN_SLACK || !alpha.is_finite() {
        return Err(Error::AlphaOutOfDomain { alpha, min: lo, max: hi });
    }
    let alpha = alpha.clamp(lo, hi);

    let m = problem.means.len();
    let mut steps = resolution;
    if m > 3 {
        while steps > 1 && binomial((steps + m - 1) as u64, (m - 1) as u64) > GRID_POINTS {
            steps -= 1;
        }
    }
    let window = 2.0 / resolution as f64;

    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut consider = |mut lambda: Vec<f64>, problem: &Problem| {
        problem.project(&mut lambda, alpha);
        let f = problem.objective(&lambda);
        if best.as_ref().is_none_or(|(g, _)| f > *g) {
            best = Some((f, lambda));
        }
    };
    compositions(steps, m, &mut |parts| {
        let lambda: Vec<f64> = parts.iter().map(|&k| k as f64 / steps as f64).collect();
        if (problem.mean(&lambda) - alpha).abs() <= window {
            consider(lambda, &problem);
        }
    });
    // Two-cycle mixtures always meet the constraint exactly.
    for c in 0..m {
        let mut lambda = vec![0.0; m];
        lambda[c] = 1.0;
        consider(lambda, &problem);
    }
    let (mut value, mut lambda) = best.expect("at least one cycle");

    let directions = problem.directions();
    for _ in 0..MAX_SWEEPS {
        let mut gain = 0.0;
        for dir in &directions {
            let g = problem.line_search(&mut lambda, dir, value);
            value += g;
            gain += g;
        }
        value = problem.objective(&lambda);
        if gain <= SWEEP_GAIN {
            break;
        }
    }
    Ok(value)
}
