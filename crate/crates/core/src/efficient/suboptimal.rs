//! Sub-optimal distances: branch and bound over a reduced set of vertex
//! mappings chosen by expanded-vertex distances or by relaxation.

use rayon::prelude::*;

use crate::error::Result;
use crate::fdg::Fdg;
use crate::graph::AttributedGraph;
use crate::matching::{bnb_search, MatchResult, SearchOptions};
use crate::weights::CostWeights;

use super::expanded::{expanded_max_distance, expanded_vertex_distance, split_ag, split_fdg};
use super::relax::{relax_probabilities, RelaxInit, RelaxParams};

/// Mapping-selection method.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SubMethod {
    /// Forbid mappings whose normalised expanded-vertex distance exceeds `tau`.
    NonIterative { tau: f64 },
    /// Relaxation from vertex costs; keep mappings with probability `>= tp`.
    RelaxVertex { tp: f64, params: RelaxParams },
    /// Relaxation from expanded-vertex distances.
    RelaxExpanded { tp: f64, params: RelaxParams },
}

/// `forbid[i][a]` is true when AG vertex `i` may not map to FDG vertex `a`.
pub fn forbid_matrix(g: &AttributedGraph, f: &Fdg, tau: f64, w: &CostWeights) -> Vec<Vec<bool>> {
    let evs = split_ag(g);
    let ews = split_fdg(f);
    let scale = w.ki(1).max(w.ki(2));
    evs.par_iter()
        .map(|ev| {
            ews.iter()
                .map(|ew| {
                    let d = expanded_vertex_distance(ev, ew, w);
                    let dmax = scale * expanded_max_distance(ev.size(), ew.size()) as f64;
                    let normalised = if dmax > 0.0 { d / dmax } else { 0.0 };
                    normalised > tau
                })
                .collect()
        })
        .collect()
}

/// Allowed-target mask (`n` rows of `m + 1`) for a method.
pub fn allowed_mask(g: &AttributedGraph, f: &Fdg, w: &CostWeights, method: SubMethod) -> Vec<Vec<bool>> {
    let m = f.order();
    match method {
        SubMethod::NonIterative { tau } => forbid_matrix(g, f, tau, w)
            .into_iter()
            .map(|row| row.into_iter().map(|x| !x).chain(std::iter::once(true)).collect())
            .collect(),
        SubMethod::RelaxVertex { tp, params } | SubMethod::RelaxExpanded { tp, params } => {
            let init = if matches!(method, SubMethod::RelaxVertex { .. }) { RelaxInit::Vertex } else { RelaxInit::Expanded };
            let p = relax_probabilities(g, f, init, params, w);
            (0..g.order())
                .map(|i| {
                    let best = p.argmax(i);
                    (0..=m).map(|a| a == m || a == best || p.rows[i][a] >= tp).collect()
                })
                .collect()
        }
    }
}

/// Branch-and-bound distance restricted to the mappings kept by `method`.
pub fn suboptimal_distance(g: &AttributedGraph, f: &Fdg, w: &CostWeights, method: SubMethod) -> Result<MatchResult> {
    let mask = allowed_mask(g, f, w, method);
    let opts = SearchOptions { mask: Some(mask), ..SearchOptions::default() };
    bnb_search(g, f, w, &opts)
}
