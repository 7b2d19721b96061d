//! Expanded vertices and the cyclic-string distance between them.

use crate::attr::{AttrTuple, Binning};
use crate::fdg::Fdg;
use crate::graph::AttributedGraph;
use crate::pdf::{prob_cost, Pdf};
use crate::weights::CostWeights;

/// AG expanded vertex: a central vertex and its outgoing arcs with their
/// targets, in cyclic order.
#[derive(Clone, Debug, PartialEq)]
pub struct AgExpandedVertex {
    pub vertex: usize,
    pub central: AttrTuple,
    /// `(target index, arc value, target value)`.
    pub externals: Vec<(usize, AttrTuple, AttrTuple)>,
}

/// FDG expanded vertex: a central vertex pdf and the pdfs of its existing
/// outgoing arcs and their targets, in cyclic order.
#[derive(Clone, Debug, PartialEq)]
pub struct FdgExpandedVertex {
    pub vertex: usize,
    pub central: Pdf,
    /// `(target index, arc pdf, target pdf)`.
    pub externals: Vec<(usize, Pdf, Pdf)>,
    pub vertex_binning: Binning,
    pub arc_binning: Binning,
}

impl AgExpandedVertex {
    /// Number of vertices, central included.
    pub fn size(&self) -> usize {
        self.externals.len() + 1
    }
}

impl FdgExpandedVertex {
    pub fn size(&self) -> usize {
        self.externals.len() + 1
    }
}

/// One expanded vertex per AG vertex, externals in arc order when one is
/// attached, else by target index.
pub fn split_ag(g: &AttributedGraph) -> Vec<AgExpandedVertex> {
    (0..g.order())
        .map(|i| AgExpandedVertex {
            vertex: i,
            central: g.vertex(i).clone(),
            externals: g
                .ordered_out(i)
                .into_iter()
                .map(|j| (j, g.arc(i, j).cloned().unwrap_or_else(AttrTuple::null), g.vertex(j).clone()))
                .collect(),
        })
        .collect()
}

/// One expanded vertex per FDG vertex over the arcs that can be non-null.
pub fn split_fdg(f: &Fdg) -> Vec<FdgExpandedVertex> {
    (0..f.order())
        .map(|i| FdgExpandedVertex {
            vertex: i,
            central: f.vertex_pdf(i).clone(),
            externals: f
                .ordered_out(i)
                .into_iter()
                .map(|j| (j, f.arc_pdf(i, j).clone(), f.vertex_pdf(j).clone()))
                .collect(),
            vertex_binning: *f.vertex_binning(),
            arc_binning: *f.arc_binning(),
        })
        .collect()
}

/// Largest first-order distance between two expanded vertices of `n` and
/// `m` vertices.
pub fn expanded_max_distance(n: usize, m: usize) -> usize {
    if n >= m {
        2 * n - 1
    } else {
        n + m - 1
    }
}

/// First-order distance between expanded vertices with the central
/// vertices matched to each other: central cost plus the cheapest alignment
/// of the two cyclic strings over every rotation of the AG string.
pub fn expanded_vertex_distance(ev: &AgExpandedVertex, ew: &FdgExpandedVertex, w: &CostWeights) -> f64 {
    let (k1, k2, kpr) = (w.ki(1), w.ki(2), w.k_pr);
    let central = k1 * prob_cost(ew.central.prob(&ev.central, &ew.vertex_binning), kpr);
    let np = ev.externals.len();
    let mp = ew.externals.len();
    let insert = k1 + k2;
    let delete: Vec<f64> = ew.externals.iter().map(|(_, _, p)| k1 * prob_cost(p.null_prob(), kpr)).collect();
    let subst: Vec<Vec<f64>> = ev
        .externals
        .iter()
        .map(|(_, b, a)| {
            ew.externals
                .iter()
                .map(|(_, q, p)| {
                    k1 * prob_cost(p.prob(a, &ew.vertex_binning), kpr) + k2 * prob_cost(q.prob(b, &ew.arc_binning), kpr)
                })
                .collect()
        })
        .collect();
    let mut best = f64::INFINITY;
    let mut prev = vec![0.0; mp + 1];
    let mut cur = vec![0.0; mp + 1];
    for s in 0..np.max(1) {
        prev[0] = central;
        for k in 1..=mp {
            prev[k] = prev[k - 1] + delete[k - 1];
        }
        for l in 1..=np {
            let x = (l - 1 + s) % np;
            cur[0] = prev[0] + insert;
            for k in 1..=mp {
                let m1 = prev[k - 1] + subst[x][k - 1];
                let m2 = prev[k] + insert;
                let m3 = cur[k - 1] + delete[k - 1];
                cur[k] = m1.min(m2).min(m3);
            }
            std::mem::swap(&mut prev, &mut cur);
        }
        best = best.min(prev[mp]);
    }
    best
}
