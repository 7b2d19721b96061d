//! Second-order (R3, R4) and planar arc-order (R5) constraints.

use crate::error::{Error, Result};
use crate::fdg::Fdg;
use crate::graph::AttributedGraph;
use crate::labelling::Labelling;
use crate::weights::CostWeights;

use super::cost::CostModel;

/// Constraint selector for [`check_constraints`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Constraint {
    /// Vertex antagonism, occurrence and existence.
    R3,
    /// Arc antagonism, occurrence and existence.
    R4,
    /// Cyclic order of outgoing arcs.
    R5,
}

/// Outcome per requested constraint; `None` when not requested.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ConstraintReport {
    pub r3: Option<bool>,
    pub r4: Option<bool>,
    pub r5: Option<bool>,
}

/// Evaluates the requested constraints on a complete labelling.
pub fn check_constraints(
    f: &Labelling,
    g: &AttributedGraph,
    fdg: &Fdg,
    which: &[Constraint],
) -> Result<ConstraintReport> {
    super::check_labelling(f, g, fdg)?;
    let w = CostWeights::restricted();
    let model = CostModel::new(g, fdg, &w);
    let mut report = ConstraintReport::default();
    let needs_counts = which.iter().any(|c| *c != Constraint::R5);
    let counts = if needs_counts { model.evaluate(f)?.counts } else { [0; 6] };
    for c in which {
        match c {
            Constraint::R3 => report.r3 = Some(counts[0] == 0 && counts[2] == 0 && counts[4] == 0),
            Constraint::R4 => report.r4 = Some(counts[1] == 0 && counts[3] == 0 && counts[5] == 0),
            Constraint::R5 => report.r5 = Some(planar_ok(g, fdg, &f.vertex_map, None)?),
        }
    }
    Ok(report)
}

/// Cyclic-order test on three positions: true when `a, b, c` appear in
/// increasing cyclic order.
#[inline]
pub fn cyclic_triple(a: usize, b: usize, c: usize) -> bool {
    (a < b && b < c) || (c < a && (b < c || a < b))
}

/// Planar arc-order check for a (possibly partial) vertex map. Only arcs
/// whose endpoints are both mapped to real vertices are constrained. With
/// `sources`, only those AG vertices are checked as arc tails.
pub(crate) fn planar_ok(
    g: &AttributedGraph,
    f: &Fdg,
    map: &[Option<usize>],
    sources: Option<&[usize]>,
) -> Result<bool> {
    if g.arc_order().is_none() {
        return Err(Error::MissingOrder("attributed graph"));
    }
    if f.arc_order().is_none() {
        return Err(Error::MissingOrder("function-described graph"));
    }
    let all: Vec<usize>;
    let sources = match sources {
        Some(s) => s,
        None => {
            all = (0..g.order()).collect();
            &all
        }
    };
    let mut pos = Vec::new();
    for &t in sources {
        let Some(d) = map.get(t).copied().flatten() else { continue };
        let d_order = &f.arc_order().unwrap()[d];
        pos.clear();
        for x in g.ordered_out(t) {
            if let Some(Some(q)) = map.get(x) {
                if let Some(p) = d_order.iter().position(|y| y == q) {
                    pos.push(p);
                }
            }
        }
        if !sequence_ok(&pos) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn sequence_ok(pos: &[usize]) -> bool {
    let r = pos.len();
    for i in 0..r {
        for j in i + 1..r {
            for k in j + 1..r {
                if !cyclic_triple(pos[i], pos[j], pos[k]) {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotations_pass_transpositions_fail() {
        assert!(sequence_ok(&[0, 1, 2]));
        assert!(sequence_ok(&[1, 2, 0]));
        assert!(sequence_ok(&[2, 0, 1]));
        assert!(!sequence_ok(&[0, 2, 1]));
        assert!(!sequence_ok(&[1, 0, 2]));
        assert!(!sequence_ok(&[2, 1, 0]));
        assert!(sequence_ok(&[3, 0]));
    }
}
