//! Probabilistic relaxation of vertex-match probabilities.

use rayon::prelude::*;

use crate::fdg::Fdg;
use crate::graph::AttributedGraph;
use crate::matching::cost::CostModel;
use crate::weights::CostWeights;

use super::expanded::{expanded_vertex_distance, split_ag, split_fdg};

/// Match probabilities: one row per AG vertex, one column per FDG vertex
/// plus a last column for the null vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbMatrix {
    pub rows: Vec<Vec<f64>>,
    pub iterations: usize,
}

impl ProbMatrix {
    pub fn get(&self, i: usize, a: Option<usize>) -> f64 {
        let row = &self.rows[i];
        row[a.unwrap_or(row.len() - 1)]
    }

    /// Column of the largest probability in row `i` (lowest index on ties).
    pub fn argmax(&self, i: usize) -> usize {
        let row = &self.rows[i];
        let mut best = 0;
        for (a, p) in row.iter().enumerate() {
            if *p > row[best] {
                best = a;
            }
        }
        best
    }
}

/// How the initial probabilities are obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelaxInit {
    /// From vertex substitution costs.
    Vertex,
    /// From expanded-vertex distances.
    Expanded,
}

/// Iteration budget and stop threshold.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RelaxParams {
    pub iters: usize,
    pub tolerance: f64,
}

impl Default for RelaxParams {
    fn default() -> Self {
        RelaxParams { iters: 20, tolerance: 1e-3 }
    }
}

fn softmax(costs: &[f64]) -> Vec<f64> {
    let lo = costs.iter().copied().fold(f64::INFINITY, f64::min);
    let e: Vec<f64> = costs.iter().map(|c| (-(c - lo)).exp()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|x| x / s).collect()
}

/// Initial rows before any update.
pub fn initial_probabilities(g: &AttributedGraph, f: &Fdg, init: RelaxInit, w: &CostWeights) -> Vec<Vec<f64>> {
    let n = g.order();
    let m = f.order();
    match init {
        RelaxInit::Vertex => {
            let model = CostModel::new(g, f, w);
            (0..n)
                .map(|i| softmax(&(0..=m).map(|a| model.vcost(i, (a < m).then_some(a))).collect::<Vec<_>>()))
                .collect()
        }
        RelaxInit::Expanded => {
            let evs = split_ag(g);
            let ews = split_fdg(f);
            evs.par_iter()
                .map(|ev| {
                    let mut c: Vec<f64> = ews.iter().map(|ew| expanded_vertex_distance(ev, ew, w)).collect();
                    c.push(1.0);
                    softmax(&c)
                })
                .collect()
        }
    }
}

/// Runs synchronous relaxation sweeps from the chosen initialisation until
/// the iteration budget is spent or no entry moves by `tolerance` or more.
pub fn relax_probabilities(
    g: &AttributedGraph,
    f: &Fdg,
    init: RelaxInit,
    params: RelaxParams,
    w: &CostWeights,
) -> ProbMatrix {
    let n = g.order();
    let m = f.order();
    let model = CostModel::new(g, f, w);
    let mut p = initial_probabilities(g, f, init, w);
    let ag_nb: Vec<Vec<usize>> =
        (0..n).map(|i| (0..n).filter(|&j| j != i && (g.has_arc(i, j) || g.has_arc(j, i))).collect()).collect();
    // Column m is the null vertex.
    let fdg_nb: Vec<Vec<usize>> = (0..=m)
        .map(|a| {
            if a == m {
                (0..m).collect()
            } else {
                let mut v: Vec<usize> =
                    (0..m).filter(|&b| b != a && (f.arc_exists(a, b) || f.arc_exists(b, a))).collect();
                v.push(m);
                v
            }
        })
        .collect();
    let col = |a: usize| (a < m).then_some(a);
    let mut iterations = 0;
    while iterations < params.iters {
        let next: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|i| {
                if ag_nb[i].is_empty() {
                    return p[i].clone();
                }
                let d = 1.0 / ag_nb[i].len() as f64;
                let mut row: Vec<f64> = (0..=m)
                    .map(|a| {
                        let mut q = 0.0;
                        for &j in &ag_nb[i] {
                            let mut s = 0.0;
                            for &b in &fdg_nb[a] {
                                let c = model.vcost(i, col(a)) + model.vcost(j, col(b)) + model.acost(i, j, col(a), col(b));
                                s += (-c).exp() * p[j][b];
                            }
                            q += d * s;
                        }
                        p[i][a] * (1.0 + q)
                    })
                    .collect();
                let total: f64 = row.iter().sum();
                if total > 0.0 {
                    for x in &mut row {
                        *x /= total;
                    }
                }
                row
            })
            .collect();
        let change = next
            .iter()
            .zip(&p)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max);
        p = next;
        iterations += 1;
        if change < params.tolerance {
            break;
        }
    }
    ProbMatrix { rows: p, iterations }
}
