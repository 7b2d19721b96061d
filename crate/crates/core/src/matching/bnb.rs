//! Depth-first branch-and-bound search for the AG-to-FDG distance.
//!
//! AG vertices are assigned in index order. Each node extends the partial
//! map with one FDG vertex or with the shared null vertex, which may absorb
//! any number of AG vertices. The bound of a node is the cost so far plus,
//! for every unassigned AG vertex, its cheapest admissible step against the
//! vertices already assigned.

use crate::error::{Error, Result};
use crate::fdg::{Fdg, Role};
use crate::graph::AttributedGraph;
use crate::labelling::Labelling;
use crate::weights::{ConstraintMode, CostWeights};

use super::constraints::planar_ok;
use super::cost::{CostModel, LabellingCost};

/// Outcome of a distance computation.
#[derive(Clone, Debug, PartialEq)]
pub struct MatchResult {
    /// Minimum cost; `f64::INFINITY` when no admissible labelling exists.
    pub distance: f64,
    pub labelling: Labelling,
    pub explored_nodes: u64,
    pub valid: bool,
    /// Complete labellings reached.
    pub leaves: u64,
    /// Search events, recorded only when requested.
    pub trace: Vec<TraceEvent>,
    /// Full evaluation of the returned labelling.
    pub detail: Option<LabellingCost>,
}

impl MatchResult {
    pub(crate) fn invalid(n: usize, explored_nodes: u64, leaves: u64, trace: Vec<TraceEvent>) -> Self {
        MatchResult {
            distance: f64::INFINITY,
            labelling: Labelling::new(vec![None; n]),
            explored_nodes,
            valid: false,
            leaves,
            trace,
            detail: None,
        }
    }
}

/// Search event: a node entered with its bound `l`, a complete labelling
/// with its cost, or a return to the parent.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TraceEvent {
    Enter { l: f64 },
    Leaf { cost: f64 },
    Exit,
}

/// Switches and restrictions for [`bnb_search`].
#[derive(Clone, Debug, PartialEq)]
pub struct SearchOptions {
    /// Discard children whose bound exceeds the best cost found.
    pub bound_pruning: bool,
    /// In restricted mode, discard children that break an antagonism.
    pub antagonism_pruning: bool,
    /// Allowed targets, `n` rows of `m + 1` entries (the last one is the null
    /// vertex, which is always allowed).
    pub mask: Option<Vec<Vec<bool>>>,
    pub trace: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { bound_pruning: true, antagonism_pruning: true, mask: None, trace: false }
    }
}

impl SearchOptions {
    /// Exhaustive tree walk: no pruning of any kind.
    pub fn exhaustive() -> Self {
        SearchOptions { bound_pruning: false, antagonism_pruning: false, mask: None, trace: false }
    }
}

/// Optimal distance with default search options.
pub fn bnb_distance(g: &AttributedGraph, f: &Fdg, w: &CostWeights) -> Result<MatchResult> {
    bnb_search(g, f, w, &SearchOptions::default())
}

pub(crate) fn check_inputs(g: &AttributedGraph, f: &Fdg, w: &CostWeights, mask: Option<&Vec<Vec<bool>>>) -> Result<()> {
    w.validate()?;
    if g.is_extended() {
        return Err(Error::InvalidGraph("the matcher expects a plain attributed graph".into()));
    }
    if w.planar {
        if g.arc_order().is_none() {
            return Err(Error::MissingOrder("attributed graph"));
        }
        if f.arc_order().is_none() {
            return Err(Error::MissingOrder("function-described graph"));
        }
    }
    if let Some(mask) = mask {
        if mask.len() != g.order() || mask.iter().any(|r| r.len() != f.order() + 1) {
            return Err(Error::InvalidInput("mask must have one row per AG vertex and m + 1 columns".into()));
        }
    }
    Ok(())
}

/// Relative tolerance used when comparing bounds against the incumbent.
#[inline]
pub(crate) fn slack(best: f64) -> f64 {
    1e-9 * best.abs().max(1.0)
}

/// Returns true when `(cost, map)` beats the incumbent: lower cost, or equal
/// cost and a lexicographically smaller map (null targets sort last).
pub(crate) fn better(cost: f64, map: &[Option<usize>], best: f64, best_map: Option<&[Option<usize>]>) -> bool {
    if cost < best {
        return true;
    }
    if cost > best {
        return false;
    }
    match best_map {
        None => true,
        Some(b) => key(map) < key(b),
    }
}

fn key(map: &[Option<usize>]) -> Vec<usize> {
    map.iter().map(|t| t.unwrap_or(usize::MAX)).collect()
}

struct Step {
    cost: f64,
    antagonisms: u64,
}

struct Search<'a> {
    model: CostModel<'a>,
    opts: &'a SearchOptions,
    relaxed: bool,
    map: Vec<Option<usize>>,
    used: Vec<bool>,
    /// Slots of FDG arcs made present by the current partial map.
    present: Vec<usize>,
    best: f64,
    best_map: Option<Vec<Option<usize>>>,
    best_detail: Option<LabellingCost>,
    explored: u64,
    leaves: u64,
    trace: Vec<TraceEvent>,
    new_arcs: Vec<usize>,
}

impl<'a> Search<'a> {
    fn allowed(&self, i: usize, a: usize) -> bool {
        !self.used[a] && self.opts.mask.as_ref().is_none_or(|m| m[i][a])
    }

    fn needs_antagonism(&self) -> (bool, bool) {
        let w = self.model.w;
        if self.relaxed {
            (w.ki(3) > 0.0, w.ki(4) > 0.0)
        } else {
            (self.opts.antagonism_pruning, self.opts.antagonism_pruning)
        }
    }

    /// Cost of assigning AG vertex `i` to `a` given the first `depth`
    /// assignments. `None` when the step is forbidden.
    fn step(&mut self, i: usize, a: Option<usize>, depth: usize) -> Option<Step> {
        let mut new_arcs = std::mem::take(&mut self.new_arcs);
        let out = self.step_with(i, a, depth, &mut new_arcs);
        self.new_arcs = new_arcs;
        out
    }

    fn step_with(&self, i: usize, a: Option<usize>, depth: usize, new_arcs: &mut Vec<usize>) -> Option<Step> {
        let md = &self.model;
        let w = md.w;
        let f = md.f;
        let mut arc_sum = 0.0;
        for s in 0..depth {
            arc_sum += md.acost(i, s, a, self.map[s]) + md.acost(s, i, self.map[s], a);
        }
        let mut cost = w.ki(1) * md.vcost(i, a) + w.ki(2) * arc_sum;
        let mut antagonisms = 0u64;
        if let Some(a) = a {
            let (need_v, need_e) = self.needs_antagonism();
            if need_v && md.vguard[a] {
                let rel = &f.relations(Role::Vertex).antagonism;
                let av = (0..depth)
                    .filter_map(|s| self.map[s])
                    .filter(|&b| md.vguard[b] && rel.get(a, b))
                    .count() as u64;
                antagonisms += av;
                if self.relaxed {
                    cost += w.ki(3) * av as f64;
                }
            }
            if need_e {
                new_arcs.clear();
                for s in 0..depth {
                    if let Some(b) = self.map[s] {
                        if md.g.has_arc(i, s) {
                            new_arcs.push(f.arc_slot(a, b));
                        }
                        if md.g.has_arc(s, i) {
                            new_arcs.push(f.arc_slot(b, a));
                        }
                    }
                }
                let rel = &f.relations(Role::Arc).antagonism;
                let mut ae = 0u64;
                for (k, &x) in new_arcs.iter().enumerate() {
                    if !md.aguard[x] {
                        continue;
                    }
                    for &y in self.present.iter().chain(&new_arcs[k + 1..]) {
                        if md.aguard[y] && rel.get(x, y) {
                            ae += 1;
                        }
                    }
                }
                antagonisms += ae;
                if self.relaxed {
                    cost += w.ki(4) * ae as f64;
                }
            }
        }
        if !self.relaxed && self.opts.antagonism_pruning && antagonisms > 0 {
            return None;
        }
        Some(Step { cost, antagonisms })
    }

    fn planar_step_ok(&self, i: usize) -> bool {
        if !self.model.w.planar {
            return true;
        }
        let g = self.model.g;
        let depth = i + 1;
        let mut sources: Vec<usize> = vec![i];
        sources.extend((0..i).filter(|&s| g.has_arc(s, i)));
        let partial: Vec<Option<usize>> = (0..g.order()).map(|v| if v < depth { self.map[v] } else { None }).collect();
        planar_ok(g, self.model.f, &partial, Some(&sources)).unwrap_or(false)
    }

    /// Lower bound on the cost of assigning AG vertices `depth..n`.
    fn bound(&mut self, depth: usize) -> f64 {
        let n = self.model.n;
        let m = self.model.m;
        let mut h = 0.0;
        for j in depth..n {
            let mut best = self.step(j, None, depth).map_or(f64::INFINITY, |s| s.cost);
            for a in 0..m {
                if self.allowed(j, a) {
                    if let Some(s) = self.step(j, Some(a), depth) {
                        if s.cost < best {
                            best = s.cost;
                        }
                    }
                }
            }
            h += best;
        }
        h
    }

    fn leaf(&mut self, g: f64) -> Result<()> {
        self.leaves += 1;
        let md = &self.model;
        let del: f64 = (0..md.m).filter(|&a| !self.used[a]).map(|a| md.del[a]).sum();
        let lower = g + md.w.ki(1) * del;
        if self.opts.bound_pruning && lower > self.best + slack(self.best) {
            if self.opts.trace {
                self.trace.push(TraceEvent::Leaf { cost: lower });
            }
            return Ok(());
        }
        let eval = md.evaluate(&Labelling::new(self.map.clone()))?;
        let admissible = eval.admissible(md.w.mode);
        if self.opts.trace {
            self.trace.push(TraceEvent::Leaf { cost: if admissible { eval.cost } else { f64::INFINITY } });
        }
        if admissible && better(eval.cost, &self.map, self.best, self.best_map.as_deref()) {
            self.best = eval.cost;
            self.best_map = Some(self.map.clone());
            self.best_detail = Some(eval);
        }
        Ok(())
    }

    fn expand(&mut self, depth: usize, g: f64, l: f64) -> Result<()> {
        if self.opts.trace {
            self.trace.push(TraceEvent::Enter { l });
        }
        if depth == self.model.n {
            self.leaf(g)?;
        } else {
            let i = depth;
            let m = self.model.m;
            let mut children: Vec<(f64, f64, Option<usize>, u64)> = Vec::with_capacity(m + 1);
            for a in (0..m).map(Some).chain(std::iter::once(None)) {
                if let Some(a) = a {
                    if !self.allowed(i, a) {
                        continue;
                    }
                }
                let Some(step) = self.step(i, a, depth) else { continue };
                self.map[i] = a;
                if !self.planar_step_ok(i) {
                    self.map[i] = None;
                    continue;
                }
                if let Some(a) = a {
                    self.used[a] = true;
                }
                let before = self.present.len();
                self.push_present(i, depth);
                let h = if self.opts.bound_pruning { self.bound(depth + 1) } else { 0.0 };
                self.present.truncate(before);
                if let Some(a) = a {
                    self.used[a] = false;
                }
                self.map[i] = None;
                children.push((g + step.cost + h, g + step.cost, a, step.antagonisms));
            }
            // Stable: equal bounds keep FDG index order, null last.
            children.sort_by(|x, y| x.0.total_cmp(&y.0));
            for (l_child, g_child, a, _) in children {
                if self.opts.bound_pruning && l_child > self.best + slack(self.best) {
                    continue;
                }
                self.explored += 1;
                self.map[i] = a;
                if let Some(a) = a {
                    self.used[a] = true;
                }
                let before = self.present.len();
                self.push_present(i, depth);
                self.expand(depth + 1, g_child, l_child)?;
                self.present.truncate(before);
                if let Some(a) = a {
                    self.used[a] = false;
                }
                self.map[i] = None;
            }
        }
        if self.opts.trace {
            self.trace.push(TraceEvent::Exit);
        }
        Ok(())
    }

    fn push_present(&mut self, i: usize, depth: usize) {
        let Some(a) = self.map[i] else { return };
        let md = &self.model;
        for s in 0..depth {
            if let Some(b) = self.map[s] {
                if md.g.has_arc(i, s) {
                    self.present.push(md.f.arc_slot(a, b));
                }
                if md.g.has_arc(s, i) {
                    self.present.push(md.f.arc_slot(b, a));
                }
            }
        }
    }
}

/// Branch-and-bound distance with explicit search options.
pub fn bnb_search(g: &AttributedGraph, f: &Fdg, w: &CostWeights, opts: &SearchOptions) -> Result<MatchResult> {
    check_inputs(g, f, w, opts.mask.as_ref())?;
    let n = g.order();
    let mut s = Search {
        model: CostModel::new(g, f, w),
        opts,
        relaxed: w.mode == ConstraintMode::Relaxed,
        map: vec![None; n],
        used: vec![false; f.order()],
        present: Vec::new(),
        best: f64::INFINITY,
        best_map: None,
        best_detail: None,
        explored: 1,
        leaves: 0,
        trace: Vec::new(),
        new_arcs: Vec::new(),
    };
    let h = if opts.bound_pruning { s.bound(0) } else { 0.0 };
    s.expand(0, 0.0, h)?;
    Ok(match s.best_map {
        Some(map) => MatchResult {
            distance: s.best,
            labelling: Labelling::new(map),
            explored_nodes: s.explored,
            valid: true,
            leaves: s.leaves,
            trace: s.trace,
            detail: s.best_detail,
        },
        None => MatchResult::invalid(n, s.explored, s.leaves, s.trace),
    })
}
