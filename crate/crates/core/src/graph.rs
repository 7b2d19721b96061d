//! Directed attributed graphs and their k-extension.

use std::collections::BTreeMap;

use crate::attr::AttrTuple;
use crate::error::{Error, Result};

/// Directed graph with attribute tuples on vertices and arcs.
///
/// Arcs are keyed by ordered vertex pairs. A plain graph holds no null
/// element; an extended graph may hold null vertices and null arcs.
#[derive(Clone, Debug, PartialEq)]
pub struct AttributedGraph {
    vertices: Vec<AttrTuple>,
    arcs: BTreeMap<(usize, usize), AttrTuple>,
    arc_order: Option<Vec<Vec<usize>>>,
    extended: bool,
}

impl AttributedGraph {
    /// Builds a plain (non-extended) graph.
    pub fn new(
        vertices: Vec<AttrTuple>,
        arcs: impl IntoIterator<Item = ((usize, usize), AttrTuple)>,
    ) -> Result<Self> {
        let g = AttributedGraph {
            vertices,
            arcs: arcs.into_iter().collect(),
            arc_order: None,
            extended: false,
        };
        g.validate()?;
        Ok(g)
    }

    /// Builds a graph that may contain null elements.
    pub fn new_extended(
        vertices: Vec<AttrTuple>,
        arcs: impl IntoIterator<Item = ((usize, usize), AttrTuple)>,
    ) -> Result<Self> {
        let g = AttributedGraph {
            vertices,
            arcs: arcs.into_iter().collect(),
            arc_order: None,
            extended: true,
        };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        let n = self.vertices.len();
        let arity_v = self.vertices.iter().find(|t| !t.is_null()).map(|t| t.arity());
        for (k, v) in self.vertices.iter().enumerate() {
            if v.is_null() && !self.extended {
                return Err(Error::InvalidGraph(format!("null vertex {k} in a plain graph")));
            }
            if !v.is_null() && Some(v.arity()) != arity_v {
                return Err(Error::InvalidGraph(format!("vertex {k} has a different arity")));
            }
        }
        let arity_e = self.arcs.values().find(|t| !t.is_null()).map(|t| t.arity());
        for (&(i, j), b) in &self.arcs {
            if i == j {
                return Err(Error::InvalidGraph(format!("self-loop on vertex {i}")));
            }
            if i >= n || j >= n {
                return Err(Error::InvalidGraph(format!("arc ({i},{j}) out of range")));
            }
            if b.is_null() {
                if !self.extended {
                    return Err(Error::InvalidGraph(format!("null arc ({i},{j}) in a plain graph")));
                }
                continue;
            }
            if Some(b.arity()) != arity_e {
                return Err(Error::InvalidGraph(format!("arc ({i},{j}) has a different arity")));
            }
            if self.vertices[i].is_null() || self.vertices[j].is_null() {
                return Err(Error::InvalidGraph(format!(
                    "arc ({i},{j}) is non-null but an endpoint is null"
                )));
            }
        }
        if let Some(order) = &self.arc_order {
            self.check_order(order)?;
        }
        Ok(())
    }

    fn check_order(&self, order: &[Vec<usize>]) -> Result<()> {
        if order.len() != self.order() {
            return Err(Error::InvalidGraph("arc order must list every vertex".into()));
        }
        for (i, targets) in order.iter().enumerate() {
            let mut listed: Vec<usize> = targets.clone();
            listed.sort_unstable();
            let expected: Vec<usize> = self.out_neighbours(i).collect();
            if listed != expected {
                return Err(Error::InvalidGraph(format!(
                    "arc order of vertex {i} does not list its outgoing arcs exactly once"
                )));
            }
        }
        Ok(())
    }

    /// Attaches a per-vertex cyclic order of outgoing arcs (as target lists).
    pub fn with_arc_order(mut self, order: Vec<Vec<usize>>) -> Result<Self> {
        self.check_order(&order)?;
        self.arc_order = Some(order);
        Ok(self)
    }

    pub fn order(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_extended(&self) -> bool {
        self.extended
    }

    pub fn vertex(&self, i: usize) -> &AttrTuple {
        &self.vertices[i]
    }

    pub fn vertices(&self) -> &[AttrTuple] {
        &self.vertices
    }

    pub fn vertex_mut(&mut self, i: usize) -> &mut AttrTuple {
        &mut self.vertices[i]
    }

    /// The non-null arc value from `i` to `j`, if any.
    pub fn arc(&self, i: usize, j: usize) -> Option<&AttrTuple> {
        self.arcs.get(&(i, j)).filter(|b| !b.is_null())
    }

    pub fn has_arc(&self, i: usize, j: usize) -> bool {
        self.arc(i, j).is_some()
    }

    /// Every stored arc, including null arcs of an extended graph.
    pub fn arcs(&self) -> impl Iterator<Item = (&(usize, usize), &AttrTuple)> {
        self.arcs.iter()
    }

    pub fn arcs_mut(&mut self) -> impl Iterator<Item = (&(usize, usize), &mut AttrTuple)> {
        self.arcs.iter_mut()
    }

    /// Non-null arcs only.
    pub fn real_arcs(&self) -> impl Iterator<Item = ((usize, usize), &AttrTuple)> {
        self.arcs.iter().filter(|(_, b)| !b.is_null()).map(|(&k, b)| (k, b))
    }

    pub fn arc_count(&self) -> usize {
        self.real_arcs().count()
    }

    /// Targets of the non-null outgoing arcs of `i`, ascending.
    pub fn out_neighbours(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.arcs
            .range((i, 0)..(i + 1, 0))
            .filter(|(_, b)| !b.is_null())
            .map(|(&(_, j), _)| j)
    }

    pub fn arc_order(&self) -> Option<&[Vec<usize>]> {
        self.arc_order.as_deref()
    }

    /// Outgoing targets of `i` in cyclic order when one is attached, else ascending.
    pub fn ordered_out(&self, i: usize) -> Vec<usize> {
        match &self.arc_order {
            Some(o) => o[i].clone(),
            None => self.out_neighbours(i).collect(),
        }
    }

    /// Number of non-null vertices.
    pub fn real_order(&self) -> usize {
        self.vertices.iter().filter(|v| !v.is_null()).count()
    }

    /// Drops null vertices and null arcs. Returns the plain graph and the
    /// original index of each kept vertex.
    pub fn compact(&self) -> (AttributedGraph, Vec<usize>) {
        let origin: Vec<usize> = (0..self.order()).filter(|&i| !self.vertices[i].is_null()).collect();
        let mut index = vec![usize::MAX; self.order()];
        for (new, &old) in origin.iter().enumerate() {
            index[old] = new;
        }
        let vertices = origin.iter().map(|&i| self.vertices[i].clone()).collect();
        let arcs: BTreeMap<_, _> = self
            .real_arcs()
            .map(|((i, j), b)| ((index[i], index[j]), b.clone()))
            .collect();
        let arc_order = self.arc_order.as_ref().map(|o| {
            origin
                .iter()
                .map(|&i| o[i].iter().filter(|&&j| index[j] != usize::MAX).map(|&j| index[j]).collect())
                .collect()
        });
        let g = AttributedGraph { vertices, arcs, arc_order, extended: false };
        (g, origin)
    }
}

/// Pads `g` to a complete graph of order `k`; every added vertex and arc is null.
pub fn extend_ag(g: &AttributedGraph, k: usize) -> Result<AttributedGraph> {
    let n = g.order();
    if k < n {
        return Err(Error::InvalidExtension { order: n, target: k });
    }
    let mut vertices = g.vertices.clone();
    vertices.resize(k, AttrTuple::null());
    let mut arcs = g.arcs.clone();
    for i in 0..k {
        for j in 0..k {
            if i != j {
                arcs.entry((i, j)).or_insert_with(AttrTuple::null);
            }
        }
    }
    let arc_order = g.arc_order.as_ref().map(|o| {
        let mut o = o.clone();
        o.resize(k, Vec::new());
        o
    });
    Ok(AttributedGraph { vertices, arcs, arc_order, extended: true })
}

/// 1-based arc label of the ordered pair `(k, l)` in a complete graph of order `n`.
pub fn arc_number(k: usize, l: usize, n: usize) -> Result<usize> {
    if k == l || k == 0 || l == 0 || k > n || l > n {
        return Err(Error::InvalidIndex(format!("arc_number({k}, {l}, {n})")));
    }
    Ok(if l < k { (k - 1) * (n - 1) + l } else { (k - 1) * (n - 1) + l - 1 })
}

/// 0-based slot of arc `(i, j)` in a complete digraph of order `n`.
#[inline]
pub(crate) fn arc_slot(i: usize, j: usize, n: usize) -> usize {
    debug_assert!(i != j && i < n && j < n);
    i * (n - 1) + if j < i { j } else { j - 1 }
}

/// Inverse of [`arc_slot`].
#[inline]
pub(crate) fn slot_arc(s: usize, n: usize) -> (usize, usize) {
    let i = s / (n - 1);
    let r = s % (n - 1);
    (i, if r < i { r } else { r + 1 })
}
