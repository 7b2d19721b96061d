//! Edit distance between attributed graphs and a k-nearest-neighbour
//! classifier on top of it.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;

use crate::attr::{AttrTuple, AttrValue};
use crate::error::{Error, Result};
use crate::graph::AttributedGraph;
use crate::labelling::Labelling;

/// Substitution cost between two attribute tuples.
#[derive(Clone)]
pub enum SubCost {
    /// `c` when the tuples differ, else 0.
    Mismatch(f64),
    /// 1 when the squared difference exceeds `k`, else 0.
    SquaredThreshold(f64),
    /// 1 above 10, 1/2 from 5 to 10, 0 below 5 (absolute difference).
    Banded,
    Custom(Arc<dyn Fn(&AttrTuple, &AttrTuple) -> f64 + Send + Sync>),
}

impl fmt::Debug for SubCost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubCost::Mismatch(c) => write!(f, "Mismatch({c})"),
            SubCost::SquaredThreshold(k) => write!(f, "SquaredThreshold({k})"),
            SubCost::Banded => write!(f, "Banded"),
            SubCost::Custom(_) => write!(f, "Custom"),
        }
    }
}

fn numeric(v: &AttrValue) -> f64 {
    match v {
        AttrValue::Cat(c) => *c as f64,
        AttrValue::Real(x) => *x,
    }
}

/// Sum of squared component differences.
fn squared_difference(a: &AttrTuple, b: &AttrTuple) -> f64 {
    a.values().iter().zip(b.values()).map(|(x, y)| (numeric(x) - numeric(y)).powi(2)).sum()
}

impl SubCost {
    pub fn cost(&self, a: &AttrTuple, b: &AttrTuple) -> f64 {
        match self {
            SubCost::Mismatch(c) => {
                if a == b {
                    0.0
                } else {
                    *c
                }
            }
            SubCost::SquaredThreshold(k) => (squared_difference(a, b) > *k) as u8 as f64,
            SubCost::Banded => {
                let d = squared_difference(a, b).sqrt();
                if d > 10.0 {
                    1.0
                } else if d >= 5.0 {
                    0.5
                } else {
                    0.0
                }
            }
            SubCost::Custom(f) => f(a, b),
        }
    }
}

/// Insertion and deletion constants plus substitution functions.
#[derive(Clone, Debug)]
pub struct EditCosts {
    pub vertex_insert: f64,
    pub arc_insert: f64,
    pub vertex_delete: f64,
    pub arc_delete: f64,
    pub vertex_sub: SubCost,
    pub arc_sub: SubCost,
}

impl EditCosts {
    /// Unit insertions and deletions, unit cost for any changed attribute.
    pub fn unit() -> Self {
        EditCosts {
            vertex_insert: 1.0,
            arc_insert: 1.0,
            vertex_delete: 1.0,
            arc_delete: 1.0,
            vertex_sub: SubCost::Mismatch(1.0),
            arc_sub: SubCost::Mismatch(1.0),
        }
    }

    /// Unit insertions and deletions; substitution costs 1 when the squared
    /// difference exceeds `k` (4 by default).
    pub fn squared_threshold(k: f64) -> Self {
        EditCosts { vertex_sub: SubCost::SquaredThreshold(k), arc_sub: SubCost::SquaredThreshold(k), ..Self::unit() }
    }

    /// Unit insertions and deletions with the banded substitution cost.
    pub fn banded() -> Self {
        EditCosts { vertex_sub: SubCost::Banded, arc_sub: SubCost::Banded, ..Self::unit() }
    }

    pub fn validate(&self) -> Result<()> {
        let c = [self.vertex_insert, self.arc_insert, self.vertex_delete, self.arc_delete];
        if c.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(Error::Config("edit costs must be finite and non-negative".into()));
        }
        Ok(())
    }
}

impl Default for EditCosts {
    fn default() -> Self {
        Self::unit()
    }
}

impl FromStr for EditCosts {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unit" => Ok(Self::unit()),
            "squared" => Ok(Self::squared_threshold(4.0)),
            "banded" => Ok(Self::banded()),
            _ => Err(Error::Config(format!("unknown cost preset `{s}` (unit, squared, banded)"))),
        }
    }
}

/// Total edit cost of turning `g1` into `g2` under the vertex map `f`
/// (`g1` vertices mapped to `None` are deleted).
pub fn edit_cost(g1: &AttributedGraph, g2: &AttributedGraph, f: &Labelling, c: &EditCosts) -> Result<f64> {
    if f.len() != g1.order() {
        return Err(Error::InvalidLabelling(format!("labelling covers {} of {} vertices", f.len(), g1.order())));
    }
    f.check_injective()?;
    if f.vertex_map.iter().flatten().any(|t| *t >= g2.order()) {
        return Err(Error::InvalidLabelling("target outside the second graph".into()));
    }
    let mut matched = vec![false; g2.order()];
    let mut total = 0.0;
    for (i, t) in f.vertex_map.iter().enumerate() {
        match t {
            Some(t) => {
                matched[*t] = true;
                total += c.vertex_sub.cost(g1.vertex(i), g2.vertex(*t));
            }
            None => total += c.vertex_delete,
        }
    }
    total += matched.iter().filter(|m| !**m).count() as f64 * c.vertex_insert;
    let mut covered = 0usize;
    for ((i, j), b) in g1.real_arcs() {
        match (f.vertex_map[i], f.vertex_map[j]) {
            (Some(p), Some(q)) if g2.has_arc(p, q) => {
                covered += 1;
                total += c.arc_sub.cost(b, g2.arc(p, q).unwrap());
            }
            _ => total += c.arc_delete,
        }
    }
    total += (g2.arc_count() - covered) as f64 * c.arc_insert;
    Ok(total)
}

struct EditSearch<'a> {
    g1: &'a AttributedGraph,
    g2: &'a AttributedGraph,
    c: &'a EditCosts,
    /// `vsub[i * (m + 1) + t]`, `t == m` for deletion.
    vsub: Vec<f64>,
    /// Cheapest option per `g1` vertex, ignoring which targets are free.
    vmin: Vec<f64>,
    map: Vec<Option<usize>>,
    used: Vec<bool>,
    best: f64,
    best_map: Option<Vec<Option<usize>>>,
}

impl EditSearch<'_> {
    /// Cost of the arcs between vertex `i` and every earlier vertex once
    /// `i` is mapped to `t`.
    fn arc_step(&self, i: usize, t: Option<usize>) -> f64 {
        let mut s = 0.0;
        for j in 0..i {
            let u = self.map[j];
            for (x, y, p, q) in [(i, j, t, u), (j, i, u, t)] {
                let a = self.g1.arc(x, y);
                let b = match (p, q) {
                    (Some(p), Some(q)) => self.g2.arc(p, q),
                    _ => None,
                };
                s += match (a, b) {
                    (Some(a), Some(b)) => self.c.arc_sub.cost(a, b),
                    (Some(_), None) => self.c.arc_delete,
                    (None, Some(_)) => self.c.arc_insert,
                    (None, None) => 0.0,
                };
            }
        }
        s
    }

    /// Insertions of `g2` vertices and arcs left unmatched at a leaf.
    fn leaf_rest(&self) -> f64 {
        let mut s = self.used.iter().filter(|u| !**u).count() as f64 * self.c.vertex_insert;
        for ((p, q), _) in self.g2.real_arcs() {
            if !self.used[p] || !self.used[q] {
                s += self.c.arc_insert;
            }
        }
        s
    }

    fn run(&mut self, i: usize, g: f64, h: f64) {
        let n = self.g1.order();
        let m = self.g2.order();
        if i == n {
            let total = g + self.leaf_rest();
            if self.best_map.is_none() || total < self.best - 1e-12 * self.best.abs().max(1.0) {
                self.best = total;
                self.best_map = Some(self.map.clone());
            }
            return;
        }
        let h = h - self.vmin[i];
        for t in (0..m).map(Some).chain(std::iter::once(None)) {
            if let Some(t) = t {
                if self.used[t] {
                    continue;
                }
            }
            let v = self.vsub[i * (m + 1) + t.unwrap_or(m)];
            let step = v + self.arc_step(i, t);
            if g + step + h > self.best + 1e-9 * self.best.abs().max(1.0) {
                continue;
            }
            self.map[i] = t;
            if let Some(t) = t {
                self.used[t] = true;
            }
            self.run(i + 1, g + step, h);
            if let Some(t) = t {
                self.used[t] = false;
            }
            self.map[i] = None;
        }
    }
}

/// Minimum edit cost over all injective vertex maps from `g1` into `g2`,
/// found by depth-first branch and bound. Ties go to the lexicographically
/// smallest map (deletion ordered last).
pub fn edit_distance(g1: &AttributedGraph, g2: &AttributedGraph, c: &EditCosts) -> Result<(f64, Labelling)> {
    c.validate()?;
    if g1.is_extended() || g2.is_extended() {
        return Err(Error::InvalidGraph("edit distance expects non-extended graphs".into()));
    }
    let n = g1.order();
    let m = g2.order();
    let mut vsub = Vec::with_capacity(n * (m + 1));
    for i in 0..n {
        for t in 0..m {
            vsub.push(c.vertex_sub.cost(g1.vertex(i), g2.vertex(t)));
        }
        vsub.push(c.vertex_delete);
    }
    let vmin: Vec<f64> =
        (0..n).map(|i| vsub[i * (m + 1)..(i + 1) * (m + 1)].iter().copied().fold(f64::INFINITY, f64::min)).collect();
    let h: f64 = vmin.iter().sum();
    let mut s = EditSearch {
        g1,
        g2,
        c,
        vsub,
        vmin,
        map: vec![None; n],
        used: vec![false; m],
        best: f64::INFINITY,
        best_map: None,
    };
    s.run(0, 0.0, h);
    let f = Labelling::new(s.best_map.expect("deleting every vertex is always feasible"));
    let d = edit_cost(g1, g2, &f, c)?;
    Ok((d, f))
}

/// Majority class among the `k` references closest to `test`. Ties on the
/// vote go to the smaller mean distance, then to the lower class index.
pub fn knn_classify(
    test: &AttributedGraph,
    refs: &[(AttributedGraph, usize)],
    k: usize,
    c: &EditCosts,
) -> Result<usize> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    if refs.is_empty() {
        return Err(Error::InvalidInput("no reference graphs".into()));
    }
    let d: Vec<f64> = refs
        .par_iter()
        .map(|(g, _)| edit_distance(test, g, c).map(|r| r.0))
        .collect::<Result<_>>()?;
    let mut idx: Vec<usize> = (0..refs.len()).collect();
    idx.sort_by(|a, b| d[*a].total_cmp(&d[*b]).then(a.cmp(b)));
    idx.truncate(k);
    let classes = refs.iter().map(|r| r.1).max().unwrap() + 1;
    let mut votes = vec![(0usize, 0.0f64); classes];
    for i in idx {
        votes[refs[i].1].0 += 1;
        votes[refs[i].1].1 += d[i];
    }
    let mut best: Option<(usize, usize, f64)> = None;
    for (cls, (v, s)) in votes.into_iter().enumerate() {
        if v == 0 {
            continue;
        }
        let mean = s / v as f64;
        let better = match best {
            None => true,
            Some((_, bv, bm)) => v > bv || (v == bv && mean < bm),
        };
        if better {
            best = Some((cls, v, mean));
        }
    }
    Ok(best.unwrap().0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(x: f64) -> AttributedGraph {
        AttributedGraph::new(vec![AttrTuple::real(x)], vec![]).unwrap()
    }

    #[test]
    fn substitution_beats_delete_insert() {
        let (d, f) = edit_distance(&single(1.0), &single(2.0), &EditCosts::unit()).unwrap();
        assert_eq!(d, 1.0);
        assert_eq!(f.vertex_map, vec![Some(0)]);
    }

    #[test]
    fn banded_preset() {
        let c = SubCost::Banded;
        let a = AttrTuple::real(0.0);
        assert_eq!(c.cost(&a, &AttrTuple::real(11.0)), 1.0);
        assert_eq!(c.cost(&a, &AttrTuple::real(10.0)), 0.5);
        assert_eq!(c.cost(&a, &AttrTuple::real(5.0)), 0.5);
        assert_eq!(c.cost(&a, &AttrTuple::real(4.9)), 0.0);
    }

    #[test]
    fn squared_preset() {
        let c = SubCost::SquaredThreshold(4.0);
        assert_eq!(c.cost(&AttrTuple::real(0.0), &AttrTuple::real(2.0)), 0.0);
        assert_eq!(c.cost(&AttrTuple::real(0.0), &AttrTuple::real(2.1)), 1.0);
    }
}
