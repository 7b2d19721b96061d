//! Exhaustive enumeration of every labelling, for small instances.

use crate::error::{Error, Result};
use crate::fdg::Fdg;
use crate::graph::AttributedGraph;
use crate::labelling::Labelling;
use crate::weights::CostWeights;

use super::bnb::{better, check_inputs, MatchResult};
use super::cost::CostModel;

/// Largest `order(G) + order(F)` accepted by [`exhaustive_oracle`].
pub const ORACLE_LIMIT: usize = 10;

/// Minimum-cost labelling by enumerating every map that is injective on
/// real targets. Ties go to the lexicographically smallest map.
pub fn exhaustive_oracle(g: &AttributedGraph, f: &Fdg, w: &CostWeights) -> Result<MatchResult> {
    exhaustive_oracle_masked(g, f, w, None)
}

/// [`exhaustive_oracle`] restricted to the allowed targets of `mask`.
pub fn exhaustive_oracle_masked(
    g: &AttributedGraph,
    f: &Fdg,
    w: &CostWeights,
    mask: Option<&Vec<Vec<bool>>>,
) -> Result<MatchResult> {
    let (n, m) = (g.order(), f.order());
    if n + m > ORACLE_LIMIT {
        return Err(Error::TooLarge { n, m, limit: ORACLE_LIMIT });
    }
    check_inputs(g, f, w, mask)?;
    let model = CostModel::new(g, f, w);
    let mut map = vec![None; n];
    let mut used = vec![false; m];
    let mut best = f64::INFINITY;
    let mut best_map: Option<Vec<Option<usize>>> = None;
    let mut best_detail = None;
    let mut count = 0u64;
    let mut err = None;
    enumerate(0, &mut map, &mut used, mask, &mut |map: &[Option<usize>]| {
        count += 1;
        match model.evaluate(&Labelling::new(map.to_vec())) {
            Ok(e) => {
                if e.admissible(w.mode) && better(e.cost, map, best, best_map.as_deref()) {
                    best = e.cost;
                    best_map = Some(map.to_vec());
                    best_detail = Some(e);
                }
            }
            Err(e) => err = Some(e),
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(match best_map {
        Some(map) => MatchResult {
            distance: best,
            labelling: Labelling::new(map),
            explored_nodes: count,
            valid: true,
            leaves: count,
            trace: Vec::new(),
            detail: best_detail,
        },
        None => MatchResult::invalid(n, count, count, Vec::new()),
    })
}

/// Calls `visit` once per labelling, in lexicographic order of targets with
/// the null target last.
pub(crate) fn enumerate(
    i: usize,
    map: &mut Vec<Option<usize>>,
    used: &mut Vec<bool>,
    mask: Option<&Vec<Vec<bool>>>,
    visit: &mut dyn FnMut(&[Option<usize>]),
) {
    if i == map.len() {
        visit(map);
        return;
    }
    for a in 0..used.len() {
        if used[a] || mask.is_some_and(|m| !m[i][a]) {
            continue;
        }
        used[a] = true;
        map[i] = Some(a);
        enumerate(i + 1, map, used, mask, visit);
        used[a] = false;
    }
    map[i] = None;
    enumerate(i + 1, map, used, mask, visit);
}
