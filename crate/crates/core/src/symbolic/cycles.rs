//! Extremal mean cycles of the transition graph.
//!
//! The set of integrals `∫φ dμ` over invariant measures is the closed
//! interval between the minimum and maximum mean weight of a directed cycle
//! (cycle measures are the extreme points of the invariant measures at the
//! transition level). Both ends are computed with Karp's dynamic program.

use super::{Potential, SftSystem};
use crate::linalg::strongly_connected_components;

/// Edge weights of the transition graph: `Some(w)` on allowed transitions.
pub type EdgeWeights = Vec<Vec<Option<f64>>>;

/// Weights of a depth <= 2 potential on the transition graph. A depth-1
/// potential puts `φ(i)` on every edge leaving `i`.
pub fn edge_weights(sft: &SftSystem, potential: &Potential) -> EdgeWeights {
    assert!(potential.depth() <= 2, "edge weights need depth <= 2 (recode first)");
    let n = sft.alphabet_size();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if !sft.allowed(i, j) {
                        None
                    } else if potential.depth() == 1 {
                        potential.value(&[i])
                    } else {
                        potential.value(&[i, j])
                    }
                })
                .collect()
        })
        .collect()
}

/// Maximum mean edge weight over directed cycles of a strongly connected graph.
pub fn max_mean_cycle(weights: &EdgeWeights) -> f64 {
    let n = weights.len();
    // best[k][v]: heaviest walk of exactly k edges from node 0 to v.
    let mut best = vec![vec![f64::NEG_INFINITY; n]; n + 1];
    best[0][0] = 0.0;
    for k in 1..=n {
        for u in 0..n {
            let from = best[k - 1][u];
            if from == f64::NEG_INFINITY {
                continue;
            }
            for v in 0..n {
                if let Some(w) = weights[u][v] {
                    if from + w > best[k][v] {
                        best[k][v] = from + w;
                    }
                }
            }
        }
    }
    let mut answer = f64::NEG_INFINITY;
    for v in 0..n {
        if best[n][v] == f64::NEG_INFINITY {
            continue;
        }
        let worst = (0..n)
            .filter(|&k| best[k][v] > f64::NEG_INFINITY)
            .map(|k| (best[n][v] - best[k][v]) / (n - k) as f64)
            .fold(f64::INFINITY, f64::min);
        answer = answer.max(worst);
    }
    answer
}

pub fn min_mean_cycle(weights: &EdgeWeights) -> f64 {
    -max_mean_cycle(&negate(weights))
}

fn negate(weights: &EdgeWeights) -> EdgeWeights {
    weights.iter().map(|r| r.iter().map(|w| w.map(|x| -x)).collect()).collect()
}

/// Which end of the spectrum an extremal cycle analysis refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Extremum {
    Min,
    Max,
}

/// Dual data of an extremal mean cycle problem.
#[derive(Debug, Clone)]
pub struct ExtremalCycles {
    /// The extremal mean `λ`.
    pub mean: f64,
    /// A gauge `h` with `w(u,v) - λ + h(u) - h(v) <= 0` on every edge
    /// (for `Max`; reversed for `Min`), equality on extremal cycles.
    pub gauge: Vec<f64>,
    /// Edges lying on cycles of extremal mean.
    pub subgraph: Vec<Vec<bool>>,
}

impl ExtremalCycles {
    pub fn analyse(weights: &EdgeWeights, extremum: Extremum) -> Self {
        let w = match extremum {
            Extremum::Max => weights.clone(),
            Extremum::Min => negate(weights),
        };
        let mean = max_mean_cycle(&w);
        let gauge = longest_path_gauge(&w, mean);
        let subgraph = tight_cycle_edges(&w, mean, &gauge);
        let (mean, gauge) = match extremum {
            Extremum::Max => (mean, gauge),
            Extremum::Min => (-mean, gauge.into_iter().map(|h| -h).collect()),
        };
        ExtremalCycles { mean, gauge, subgraph }
    }

    /// One extremal cycle as a list of nodes, chosen deterministically:
    /// start at the smallest node of the subgraph and follow smallest
    /// successors until a node repeats.
    pub fn cycle(&self) -> Vec<usize> {
        let n = self.subgraph.len();
        let start = (0..n)
            .find(|&u| self.subgraph[u].iter().any(|&b| b))
            .expect("a strongly connected graph has an extremal cycle");
        let mut seen = vec![None; n];
        let mut path = Vec::new();
        let mut u = start;
        loop {
            if let Some(pos) = seen[u] {
                return path[pos..].to_vec();
            }
            seen[u] = Some(path.len());
            path.push(u);
            u = (0..n).find(|&v| self.subgraph[u][v]).expect("subgraph edges lie on cycles");
        }
    }
}

/// `h(v) = max` reduced weight of a walk ending at `v` (Bellman–Ford with
/// every node as a source). Reduced weights have no positive cycles.
fn longest_path_gauge(weights: &EdgeWeights, mean: f64) -> Vec<f64> {
    let n = weights.len();
    let mut h = vec![0.0; n];
    for _ in 0..n {
        let mut changed = false;
        for u in 0..n {
            for v in 0..n {
                if let Some(w) = weights[u][v] {
                    let cand = h[u] + (w - mean);
                    if cand > h[v] {
                        h[v] = cand;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    h
}

fn tight_cycle_edges(weights: &EdgeWeights, mean: f64, gauge: &[f64]) -> Vec<Vec<bool>> {
    let n = weights.len();
    let scale = weights
        .iter()
        .flatten()
        .flatten()
        .fold(mean.abs(), |m, w| m.max(w.abs()))
        .max(gauge.iter().fold(0.0f64, |m, h| m.max(h.abs())));
    let tol = 1e-9 * (1.0 + scale);
    let tight: Vec<Vec<bool>> = (0..n)
        .map(|u| {
            (0..n)
                .map(|v| match weights[u][v] {
                    Some(w) => (gauge[u] + w - mean - gauge[v]).abs() <= tol,
                    None => false,
                })
                .collect()
        })
        .collect();
    let adj: Vec<Vec<usize>> = tight
        .iter()
        .map(|row| row.iter().enumerate().filter_map(|(v, &b)| b.then_some(v)).collect())
        .collect();
    let mut component = vec![usize::MAX; n];
    for (c, comp) in strongly_connected_components(&adj).iter().enumerate() {
        for &v in comp {
            component[v] = c;
        }
    }
    (0..n)
        .map(|u| (0..n).map(|v| tight[u][v] && component[u] == component[v]).collect())
        .collect()
}

/// Every simple cycle of the transition graph, each listed from its
/// smallest node. Exponential; meant for oracle-scale alphabets.
pub fn simple_cycles(sft: &SftSystem) -> Vec<Vec<usize>> {
    fn dfs(
        sft: &SftSystem,
        start: usize,
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) {
        let u = *path.last().unwrap();
        for v in sft.successors(u) {
            if v == start {
                out.push(path.clone());
            } else if v > start && !on_path[v] {
                on_path[v] = true;
                path.push(v);
                dfs(sft, start, path, on_path, out);
                path.pop();
                on_path[v] = false;
            }
        }
    }

    let n = sft.alphabet_size();
    let mut out = Vec::new();
    let mut on_path = vec![false; n];
    for start in 0..n {
        let mut path = vec![start];
        on_path[start] = true;
        dfs(sft, start, &mut path, &mut on_path, &mut out);
        on_path[start] = false;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_mean_cycles() {
        let sft = SftSystem::golden_mean();
        let mut cycles = simple_cycles(&sft);
        cycles.sort();
        assert_eq!(cycles, vec![vec![0], vec![0, 1]]);
    }

    #[test]
    fn full_three_shift_has_eight_cycles() {
        let sft = SftSystem::full_shift(3).unwrap();
        assert_eq!(simple_cycles(&sft).len(), 3 + 3 + 2);
    }

    #[test]
    fn karp_matches_cycle_enumeration() {
        let sft = SftSystem::new(&[vec![1, 1, 0], vec![0, 0, 1], vec![1, 1, 1]]).unwrap();
        let phi = Potential::from_fn(&sft, 2, |w| (w[0] as f64 * 1.7 - w[1] as f64).sin()).unwrap();
        let weights = edge_weights(&sft, &phi);
        let means: Vec<f64> = simple_cycles(&sft)
            .iter()
            .map(|c| {
                let s: f64 =
                    (0..c.len()).map(|i| weights[c[i]][c[(i + 1) % c.len()]].unwrap()).sum();
                s / c.len() as f64
            })
            .collect();
        let max = means.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = means.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!((max_mean_cycle(&weights) - max).abs() < 1e-12);
        assert!((min_mean_cycle(&weights) - min).abs() < 1e-12);
    }

    #[test]
    fn maximizing_subgraph_of_golden_mean() {
        let sft = SftSystem::golden_mean();
        let weights = edge_weights(&sft, &Potential::indicator(&sft, 1));
        let top = ExtremalCycles::analyse(&weights, Extremum::Max);
        assert!((top.mean - 0.5).abs() < 1e-15);
        assert_eq!(top.subgraph, vec![vec![false, true], vec![true, false]]);
        assert_eq!(top.cycle(), vec![0, 1]);
        let bottom = ExtremalCycles::analyse(&weights, Extremum::Min);
        assert_eq!(bottom.mean, 0.0);
        assert_eq!(bottom.subgraph, vec![vec![true, false], vec![false, false]]);
        assert_eq!(bottom.cycle(), vec![0]);
    }

    #[test]
    fn gauge_dominates_every_edge() {
        let sft = SftSystem::full_shift(3).unwrap();
        let phi = Potential::from_fn(&sft, 2, |w| ((w[0] * 3 + w[1]) as f64 * 0.37).cos()).unwrap();
        let weights = edge_weights(&sft, &phi);
        let top = ExtremalCycles::analyse(&weights, Extremum::Max);
        for u in 0..3 {
            for v in 0..3 {
                let w = weights[u][v].unwrap();
                assert!(w - top.mean + top.gauge[u] - top.gauge[v] <= 1e-12);
            }
        }
    }
}
