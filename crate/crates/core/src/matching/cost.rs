//! First- and second-order costs of mapping an AG onto an FDG.

use crate::attr::AttrTuple;
use crate::fdg::{Fdg, RelationKind, Role};
use crate::graph::AttributedGraph;
use crate::labelling::Labelling;
use crate::pdf::{prob_cost, Pdf};
use crate::weights::{ConstraintMode, CostWeights};

use super::constraints::planar_ok;
use crate::error::Result;

/// Cost of substituting vertex value `a` for an FDG vertex with pdf `p`.
pub fn vertex_cost(a: &AttrTuple, p: &Pdf, f: &Fdg, k_pr: f64) -> f64 {
    prob_cost(p.prob(a, f.vertex_binning()), k_pr)
}

/// Cost of an AG arc value `b` (null when absent) against an FDG arc pdf.
/// `endpoints_real` says whether both AG endpoints map to real FDG vertices;
/// otherwise only a null arc is free.
pub fn arc_cost(b: &AttrTuple, q: &Pdf, endpoints_real: bool, f: &Fdg, k_pr: f64) -> f64 {
    if endpoints_real {
        prob_cost(q.prob(b, f.arc_binning()), k_pr)
    } else if b.is_null() {
        0.0
    } else {
        1.0
    }
}

/// Second-order cost (0 or 1) of one pair of FDG elements given whether
/// each is present in the AG. `guard_x` is true when element `x` is not
/// certainly null in the FDG.
pub fn second_order_cost(
    kind: RelationKind,
    role: Role,
    f: &Fdg,
    x: usize,
    y: usize,
    x_present: bool,
    y_present: bool,
) -> u32 {
    let gx = !f.never_present(role, x);
    let gy = !f.never_present(role, y);
    let applies = match kind {
        RelationKind::Antagonism => x_present && y_present && gx && gy,
        RelationKind::Occurrence => x_present && !y_present && gx,
        RelationKind::Existence => !x_present && !y_present && gx && gy,
    };
    (applies && f.relations(role).get(kind).get(x, y)) as u32
}

/// Violation counts in the order `[A_v, A_e, O_v, O_e, E_v, E_e]`, which
/// matches the weights `K3..K8`.
pub type RelationCounts = [u64; 6];

/// Full evaluation of one labelling.
#[derive(Clone, Debug, PartialEq)]
pub struct LabellingCost {
    /// First-order part, already weighted by `K1` and `K2`.
    pub first_order: f64,
    pub counts: RelationCounts,
    /// Relative arc order preserved (always true when not planar).
    pub planar_ok: bool,
    /// Total cost under the mode: first-order only when restricted, plus the
    /// weighted counts when relaxed.
    pub cost: f64,
}

impl LabellingCost {
    /// True when the labelling belongs to the admissible set of the mode.
    pub fn admissible(&self, mode: ConstraintMode) -> bool {
        self.planar_ok && (mode == ConstraintMode::Relaxed || self.counts.iter().all(|c| *c == 0))
    }
}

/// Precomputed cost tables shared by the exact and approximate matchers.
pub struct CostModel<'a> {
    pub g: &'a AttributedGraph,
    pub f: &'a Fdg,
    pub w: &'a CostWeights,
    pub n: usize,
    pub m: usize,
    /// `vcost[i * (m + 1) + a]`, with `a == m` the null vertex.
    vcost: Vec<f64>,
    /// `acost[(x * n + y) * slots + s]` for AG pair `(x, y)` on FDG slot `s`.
    acost: Vec<f64>,
    /// Deletion cost `prob_cost(p_a(null))` of each FDG vertex.
    pub del: Vec<f64>,
    slots: usize,
    /// FDG vertex / arc not certainly null.
    pub vguard: Vec<bool>,
    pub aguard: Vec<bool>,
}

impl<'a> CostModel<'a> {
    pub fn new(g: &'a AttributedGraph, f: &'a Fdg, w: &'a CostWeights) -> Self {
        let n = g.order();
        let m = f.order();
        let k_pr = w.k_pr;
        let mut vcost = Vec::with_capacity(n * (m + 1));
        for i in 0..n {
            for a in 0..m {
                vcost.push(vertex_cost(g.vertex(i), f.vertex_pdf(a), f, k_pr));
            }
            vcost.push(1.0);
        }
        let slots = f.arc_slots();
        let null = AttrTuple::null();
        let mut acost = vec![0.0; n * n * slots];
        // Absent AG arcs share one row per slot.
        let absent: Vec<f64> = (0..slots).map(|s| arc_cost(&null, f.arc_pdf_at(s), true, f, k_pr)).collect();
        for x in 0..n {
            for y in 0..n {
                if x == y {
                    continue;
                }
                let row = &mut acost[(x * n + y) * slots..(x * n + y + 1) * slots];
                match g.arc(x, y) {
                    None => row.copy_from_slice(&absent),
                    Some(b) => {
                        for (s, c) in row.iter_mut().enumerate() {
                            *c = arc_cost(b, f.arc_pdf_at(s), true, f, k_pr);
                        }
                    }
                }
            }
        }
        let del = (0..m).map(|a| prob_cost(f.vertex_pdf(a).null_prob(), k_pr)).collect();
        let vguard = (0..m).map(|a| !f.never_present(Role::Vertex, a)).collect();
        let aguard = (0..slots).map(|s| !f.never_present(Role::Arc, s)).collect();
        CostModel { g, f, w, n, m, vcost, acost, del, slots, vguard, aguard }
    }

    /// Vertex substitution cost; `a == None` is the null target.
    #[inline]
    pub fn vcost(&self, i: usize, a: Option<usize>) -> f64 {
        self.vcost[i * (self.m + 1) + a.unwrap_or(self.m)]
    }

    /// Cost of AG pair `(x, y)` given the images of its endpoints.
    #[inline]
    pub fn acost(&self, x: usize, y: usize, fx: Option<usize>, fy: Option<usize>) -> f64 {
        match (fx, fy) {
            (Some(p), Some(q)) => self.acost[(x * self.n + y) * self.slots + self.f.arc_slot(p, q)],
            _ => self.g.has_arc(x, y) as u8 as f64,
        }
    }

    /// Canonical cost of a complete labelling. Both the branch-and-bound
    /// search and the exhaustive enumeration report this value.
    pub fn evaluate(&self, f: &Labelling) -> Result<LabellingCost> {
        let (n, m) = (self.n, self.m);
        let w = self.w;
        let map = &f.vertex_map;
        let mut vsum = 0.0;
        for i in 0..n {
            vsum += self.vcost(i, map[i]);
        }
        let mut matched = vec![false; m];
        for a in map.iter().flatten() {
            matched[*a] = true;
        }
        for a in 0..m {
            if !matched[a] {
                vsum += self.del[a];
            }
        }
        let mut asum = 0.0;
        for x in 0..n {
            for y in 0..n {
                if x != y {
                    asum += self.acost(x, y, map[x], map[y]);
                }
            }
        }
        let first_order = w.ki(1) * vsum + w.ki(2) * asum;
        let counts = self.counts(map, &matched);
        let planar_ok = if w.planar { planar_ok(self.g, self.f, map, None)? } else { true };
        let cost = match w.mode {
            ConstraintMode::Restricted => first_order,
            ConstraintMode::Relaxed => {
                let mut c = first_order;
                for (k, cnt) in counts.iter().enumerate() {
                    if *cnt > 0 {
                        c += w.k[k + 2] * *cnt as f64;
                    }
                }
                c
            }
        };
        Ok(LabellingCost { first_order, counts, planar_ok, cost })
    }

    /// Presence of every FDG arc slot under a labelling.
    pub fn arc_presence(&self, map: &[Option<usize>]) -> Vec<bool> {
        let mut present = vec![false; self.slots];
        for ((x, y), _) in self.g.real_arcs() {
            if let (Some(p), Some(q)) = (map[x], map[y]) {
                present[self.f.arc_slot(p, q)] = true;
            }
        }
        present
    }

    fn counts(&self, map: &[Option<usize>], vpresent: &[bool]) -> RelationCounts {
        let f = self.f;
        let mut c = [0u64; 6];
        let needed = |k: usize| self.w.mode == ConstraintMode::Restricted || self.w.k[k + 2] > 0.0;
        let vr = f.relations(Role::Vertex);
        let m = self.m;
        if needed(0) || needed(2) || needed(4) {
            for p in 0..m {
                for q in 0..m {
                    if p == q {
                        continue;
                    }
                    let (pp, qp) = (vpresent[p], vpresent[q]);
                    let (gp, gq) = (self.vguard[p], self.vguard[q]);
                    if p < q && pp && qp && gp && gq && vr.antagonism.get(p, q) {
                        c[0] += 1;
                    }
                    if pp && !qp && gp && vr.occurrence.get(p, q) {
                        c[2] += 1;
                    }
                    if p < q && !pp && !qp && gp && gq && vr.existence.get(p, q) {
                        c[4] += 1;
                    }
                }
            }
        }
        if needed(1) || needed(3) || needed(5) {
            let ar = f.relations(Role::Arc);
            let present = self.arc_presence(map);
            for s in 0..self.slots {
                if !self.aguard[s] {
                    continue;
                }
                for t in 0..self.slots {
                    if s == t {
                        continue;
                    }
                    let (sp, tp) = (present[s], present[t]);
                    let gt = self.aguard[t];
                    if s < t && sp && tp && gt && ar.antagonism.get(s, t) {
                        c[1] += 1;
                    }
                    if sp && !tp && ar.occurrence.get(s, t) {
                        c[3] += 1;
                    }
                    if s < t && !sp && !tp && gt && ar.existence.get(s, t) {
                        c[5] += 1;
                    }
                }
            }
        }
        c
    }
}

/// Cost of a complete labelling `f` from `g` into `fdg` under weights `w`.
pub fn labelling_cost(f: &Labelling, g: &AttributedGraph, fdg: &Fdg, w: &CostWeights) -> Result<LabellingCost> {
    super::check_labelling(f, g, fdg)?;
    CostModel::new(g, fdg, w).evaluate(f)
}
