//! Vertex labellings between graphs and common labellings of graph sets.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::AttributedGraph;

/// Vertex map from a source graph into a target graph. `None` is the null
/// target: the source vertex is left unmatched (mapped to the null vertex).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Labelling {
    pub vertex_map: Vec<Option<usize>>,
}

impl Labelling {
    pub fn new(vertex_map: Vec<Option<usize>>) -> Self {
        Labelling { vertex_map }
    }

    pub fn identity(n: usize) -> Self {
        Labelling { vertex_map: (0..n).map(Some).collect() }
    }

    pub fn len(&self) -> usize {
        self.vertex_map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertex_map.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<usize> {
        self.vertex_map.get(i).copied().flatten()
    }

    /// True when no two sources share a non-null target.
    pub fn is_injective(&self) -> bool {
        let mut seen = std::collections::BTreeSet::new();
        self.vertex_map.iter().flatten().all(|t| seen.insert(*t))
    }

    pub fn check_injective(&self) -> Result<()> {
        if self.is_injective() {
            Ok(())
        } else {
            Err(Error::InvalidLabelling("two source vertices share a non-null target".into()))
        }
    }

    /// Inverse map over a target of order `m`.
    pub fn inverse(&self, m: usize) -> Labelling {
        let mut inv = vec![None; m];
        for (i, t) in self.vertex_map.iter().enumerate() {
            if let Some(t) = t {
                if *t < m {
                    inv[*t] = Some(i);
                }
            }
        }
        Labelling { vertex_map: inv }
    }

    /// `other ∘ self`: first `self`, then `other`.
    pub fn then(&self, other: &Labelling) -> Labelling {
        Labelling {
            vertex_map: self.vertex_map.iter().map(|t| t.and_then(|t| other.get(t))).collect(),
        }
    }

    /// Ordering key with the null target placed after every real target.
    pub fn sort_key(&self) -> Vec<usize> {
        self.vertex_map.iter().map(|t| t.unwrap_or(usize::MAX)).collect()
    }
}

/// Arc map induced by a vertex map: each non-null source arc goes to the
/// target arc between the images of its endpoints, or to the null arc
/// (`None`) when an endpoint has the null target.
pub fn induced_arc_map(f: &Labelling, g: &AttributedGraph) -> BTreeMap<(usize, usize), Option<(usize, usize)>> {
    g.real_arcs()
        .map(|((i, j), _)| {
            let image = match (f.get(i), f.get(j)) {
                (Some(p), Some(q)) => Some((p, q)),
                _ => None,
            };
            ((i, j), image)
        })
        .collect()
}

/// One injective label map per graph of a set, into a common label space.
/// `None` marks a vertex without a label (allowed only for null vertices).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommonLabelling {
    pub maps: Vec<Vec<Option<usize>>>,
}

impl CommonLabelling {
    pub fn new(maps: Vec<Vec<Option<usize>>>) -> Self {
        CommonLabelling { maps }
    }

    /// Identity labels for graphs of the given orders.
    pub fn identity(orders: &[usize]) -> Self {
        CommonLabelling { maps: orders.iter().map(|&n| (0..n).map(Some).collect()).collect() }
    }

    /// Number of distinct labels in use.
    pub fn distinct_labels(&self) -> usize {
        let set: std::collections::BTreeSet<usize> = self.maps.iter().flatten().flatten().copied().collect();
        set.len()
    }

    /// One past the largest label in use.
    pub fn label_bound(&self) -> usize {
        self.maps.iter().flatten().flatten().map(|l| l + 1).max().unwrap_or(0)
    }

    pub(crate) fn check(&self, orders: &[usize], n: usize) -> Result<()> {
        if self.maps.len() != orders.len() {
            return Err(Error::InvalidLabelling(format!(
                "{} label maps for {} graphs",
                self.maps.len(),
                orders.len()
            )));
        }
        for (k, (map, &ord)) in self.maps.iter().zip(orders).enumerate() {
            if map.len() != ord {
                return Err(Error::InvalidLabelling(format!("graph {k}: label map length differs from order")));
            }
            let mut seen = vec![false; n];
            for l in map.iter().flatten() {
                if *l >= n {
                    return Err(Error::InvalidLabelling(format!("graph {k}: label {l} outside 0..{n}")));
                }
                if seen[*l] {
                    return Err(Error::InvalidLabelling(format!("graph {k}: duplicate label {l}")));
                }
                seen[*l] = true;
            }
        }
        Ok(())
    }
}
