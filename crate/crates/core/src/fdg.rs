//! Function-described graphs: per-element pdfs, Boolean second-order
//! relations and sample counts.

use crate::attr::{AttrTuple, Binning};
use crate::error::{Error, Result};
use crate::graph::{arc_slot, slot_arc, AttributedGraph};
use crate::labelling::CommonLabelling;
use crate::pdf::Pdf;

/// Square Boolean matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoolMatrix {
    n: usize,
    bits: Vec<bool>,
}

impl BoolMatrix {
    pub fn new(n: usize, value: bool) -> Self {
        BoolMatrix { n, bits: vec![value; n * n] }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> bool) -> Self {
        let mut bits = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                bits.push(f(i, j));
            }
        }
        BoolMatrix { n, bits }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        self.bits[i * self.n + j] = v;
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn and(&self, other: &BoolMatrix) -> BoolMatrix {
        assert_eq!(self.n, other.n);
        BoolMatrix { n: self.n, bits: self.bits.iter().zip(&other.bits).map(|(a, b)| *a && *b).collect() }
    }
}

/// Relation kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelationKind {
    Antagonism,
    Occurrence,
    Existence,
}

impl RelationKind {
    pub const ALL: [RelationKind; 3] = [RelationKind::Antagonism, RelationKind::Occurrence, RelationKind::Existence];

    pub fn symbol(self) -> &'static str {
        match self {
            RelationKind::Antagonism => "A",
            RelationKind::Occurrence => "O",
            RelationKind::Existence => "E",
        }
    }
}

/// Which element family a relation is about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Vertex,
    Arc,
}

/// The three second-order relations over one element family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relations {
    pub antagonism: BoolMatrix,
    pub occurrence: BoolMatrix,
    pub existence: BoolMatrix,
}

impl Relations {
    /// Relations over elements that all have the same presence pattern in a
    /// single sample: nothing antagonistic, everything occurrent and existent
    /// among present elements.
    pub fn from_presence(presence: &[Vec<bool>], len: usize) -> Relations {
        let present = |x: usize, k: usize| presence[k][x];
        let z = presence.len();
        let antagonism = BoolMatrix::from_fn(len, |i, j| (0..z).all(|k| !(present(i, k) && present(j, k))));
        let occurrence = BoolMatrix::from_fn(len, |i, j| (0..z).all(|k| !present(i, k) || present(j, k)));
        let existence = BoolMatrix::from_fn(len, |i, j| (0..z).all(|k| present(i, k) || present(j, k)));
        Relations { antagonism, occurrence, existence }
    }

    pub fn get(&self, kind: RelationKind) -> &BoolMatrix {
        match kind {
            RelationKind::Antagonism => &self.antagonism,
            RelationKind::Occurrence => &self.occurrence,
            RelationKind::Existence => &self.existence,
        }
    }

    pub fn get_mut(&mut self, kind: RelationKind) -> &mut BoolMatrix {
        match kind {
            RelationKind::Antagonism => &mut self.antagonism,
            RelationKind::Occurrence => &mut self.occurrence,
            RelationKind::Existence => &mut self.existence,
        }
    }

    pub(crate) fn and(&self, other: &Relations) -> Relations {
        Relations {
            antagonism: self.antagonism.and(&other.antagonism),
            occurrence: self.occurrence.and(&other.occurrence),
            existence: self.existence.and(&other.existence),
        }
    }
}

/// Function-described graph of order `n`.
///
/// Arc slots cover every ordered pair of distinct vertices; slot `s` of arc
/// `(i, j)` is `arc_number(i+1, j+1, n) - 1`. Arc pdfs are conditional on
/// both endpoints being non-null.
#[derive(Clone, Debug, PartialEq)]
pub struct Fdg {
    pub(crate) vertex_pdfs: Vec<Pdf>,
    pub(crate) arc_pdfs: Vec<Pdf>,
    pub(crate) u: Vec<u64>,
    pub(crate) z: u64,
    pub(crate) vertex_rel: Relations,
    pub(crate) arc_rel: Relations,
    pub(crate) vertex_binning: Binning,
    pub(crate) arc_binning: Binning,
    pub(crate) arc_order: Option<Vec<Vec<usize>>>,
}

pub(crate) fn slots(n: usize) -> usize {
    n * n.saturating_sub(1)
}

impl Fdg {
    /// Assembles an FDG from its parts after checking dimensions.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        vertex_pdfs: Vec<Pdf>,
        arc_pdfs: Vec<Pdf>,
        u: Vec<u64>,
        z: u64,
        vertex_rel: Relations,
        arc_rel: Relations,
        vertex_binning: Binning,
        arc_binning: Binning,
    ) -> Result<Fdg> {
        let n = vertex_pdfs.len();
        let s = slots(n);
        if arc_pdfs.len() != s || u.len() != s {
            return Err(Error::InvalidInput(format!("expected {s} arc slots for order {n}")));
        }
        for kind in RelationKind::ALL {
            if vertex_rel.get(kind).size() != n || arc_rel.get(kind).size() != s {
                return Err(Error::InvalidInput("relation matrix dimension mismatch".into()));
            }
        }
        Ok(Fdg { vertex_pdfs, arc_pdfs, u, z, vertex_rel, arc_rel, vertex_binning, arc_binning, arc_order: None })
    }

    pub fn order(&self) -> usize {
        self.vertex_pdfs.len()
    }

    pub fn z(&self) -> u64 {
        self.z
    }

    pub fn vertex_binning(&self) -> &Binning {
        &self.vertex_binning
    }

    pub fn arc_binning(&self) -> &Binning {
        &self.arc_binning
    }

    pub fn vertex_pdf(&self, i: usize) -> &Pdf {
        &self.vertex_pdfs[i]
    }

    pub fn vertex_pdfs(&self) -> &[Pdf] {
        &self.vertex_pdfs
    }

    pub fn vertex_pdf_mut(&mut self, i: usize) -> &mut Pdf {
        &mut self.vertex_pdfs[i]
    }

    pub fn arc_slot(&self, i: usize, j: usize) -> usize {
        arc_slot(i, j, self.order())
    }

    pub fn slot_arc(&self, s: usize) -> (usize, usize) {
        slot_arc(s, self.order())
    }

    pub fn arc_slots(&self) -> usize {
        self.arc_pdfs.len()
    }

    pub fn arc_pdf(&self, i: usize, j: usize) -> &Pdf {
        &self.arc_pdfs[self.arc_slot(i, j)]
    }

    pub fn arc_pdf_at(&self, s: usize) -> &Pdf {
        &self.arc_pdfs[s]
    }

    pub fn u(&self, i: usize, j: usize) -> u64 {
        self.u[self.arc_slot(i, j)]
    }

    pub fn u_at(&self, s: usize) -> u64 {
        self.u[s]
    }

    pub fn relations(&self, role: Role) -> &Relations {
        match role {
            Role::Vertex => &self.vertex_rel,
            Role::Arc => &self.arc_rel,
        }
    }

    pub fn relations_mut(&mut self, role: Role) -> &mut Relations {
        match role {
            Role::Vertex => &mut self.vertex_rel,
            Role::Arc => &mut self.arc_rel,
        }
    }

    pub fn arc_order(&self) -> Option<&[Vec<usize>]> {
        self.arc_order.as_deref()
    }

    /// Attaches a per-vertex cyclic order of outgoing arcs (target lists).
    pub fn with_arc_order(mut self, order: Vec<Vec<usize>>) -> Result<Fdg> {
        if order.len() != self.order() {
            return Err(Error::InvalidInput("arc order must list every vertex".into()));
        }
        for (i, t) in order.iter().enumerate() {
            let mut seen = std::collections::BTreeSet::new();
            for &j in t {
                if j >= self.order() || j == i || !seen.insert(j) {
                    return Err(Error::InvalidInput(format!("bad arc order entry {j} on vertex {i}")));
                }
            }
        }
        self.arc_order = Some(order);
        Ok(self)
    }

    pub fn clear_arc_order(&mut self) {
        self.arc_order = None;
    }

    /// True when the arc has non-zero probability of being non-null given
    /// its endpoints.
    pub fn arc_exists(&self, i: usize, j: usize) -> bool {
        let s = self.arc_slot(i, j);
        self.u[s] > 0 && self.arc_pdfs[s].null_prob() < 1.0
    }

    /// Outgoing existing arcs of `i`, following the arc order when present.
    pub fn ordered_out(&self, i: usize) -> Vec<usize> {
        match &self.arc_order {
            Some(o) => o[i].clone(),
            None => (0..self.order()).filter(|&j| j != i && self.arc_exists(i, j)).collect(),
        }
    }

    /// Unconditional probability that the arc in slot `s` is non-null.
    pub fn arc_presence_prob(&self, s: usize) -> f64 {
        let (i, j) = self.slot_arc(s);
        (1.0 - self.arc_pdfs[s].null_prob())
            * (1.0 - self.vertex_pdfs[i].null_prob())
            * (1.0 - self.vertex_pdfs[j].null_prob())
    }

    /// Unconditional probability that the arc in slot `s` is null.
    pub fn arc_null_prob(&self, s: usize) -> f64 {
        1.0 - self.arc_presence_prob(s)
    }

    pub(crate) fn never_present(&self, role: Role, x: usize) -> bool {
        match role {
            Role::Vertex => self.vertex_pdfs[x].null_prob() >= 1.0,
            Role::Arc => self.arc_presence_prob(x) == 0.0,
        }
    }

    pub(crate) fn never_absent(&self, role: Role, x: usize) -> bool {
        match role {
            Role::Vertex => self.vertex_pdfs[x].null_prob() == 0.0,
            Role::Arc => self.arc_presence_prob(x) == 1.0,
        }
    }

    /// Sub-FDG induced by the listed vertices, in the listed order.
    pub fn retain_vertices(&self, keep: &[usize]) -> Fdg {
        let n = self.order();
        let k = keep.len();
        let vertex_pdfs = keep.iter().map(|&i| self.vertex_pdfs[i].clone()).collect();
        let mut arc_pdfs = Vec::with_capacity(slots(k));
        let mut u = Vec::with_capacity(slots(k));
        let mut old_slot = Vec::with_capacity(slots(k));
        for a in 0..k {
            for b in 0..k {
                if a != b {
                    let s = arc_slot(keep[a], keep[b], n);
                    arc_pdfs.push(self.arc_pdfs[s].clone());
                    u.push(self.u[s]);
                    old_slot.push(s);
                }
            }
        }
        let sub = |m: &BoolMatrix, idx: &[usize]| BoolMatrix::from_fn(idx.len(), |x, y| m.get(idx[x], idx[y]));
        let rel = |r: &Relations, idx: &[usize]| Relations {
            antagonism: sub(&r.antagonism, idx),
            occurrence: sub(&r.occurrence, idx),
            existence: sub(&r.existence, idx),
        };
        let mut position = vec![usize::MAX; n];
        for (new, &old) in keep.iter().enumerate() {
            position[old] = new;
        }
        let arc_order = self.arc_order.as_ref().map(|o| {
            keep.iter()
                .map(|&i| o[i].iter().filter(|&&j| position[j] != usize::MAX).map(|&j| position[j]).collect())
                .collect()
        });
        Fdg {
            vertex_pdfs,
            arc_pdfs,
            u,
            z: self.z,
            vertex_rel: rel(&self.vertex_rel, keep),
            arc_rel: rel(&self.arc_rel, &old_slot),
            vertex_binning: self.vertex_binning,
            arc_binning: self.arc_binning,
            arc_order,
        }
    }

    /// Drops vertices whose null probability is 1.
    pub fn trim_null_vertices(&self) -> Fdg {
        let keep: Vec<usize> = (0..self.order()).filter(|&i| self.vertex_pdfs[i].null_prob() < 1.0).collect();
        self.retain_vertices(&keep)
    }
}

/// Relation value between an element that exists in `f` and a fresh null
/// element, or between two fresh null elements (`x = None`).
///
/// `first_is_new` says whether the fresh element is the first argument.
pub(crate) fn extension_relation(
    f: &Fdg,
    role: Role,
    kind: RelationKind,
    existing: Option<usize>,
    first_is_new: bool,
) -> bool {
    match (kind, existing) {
        (RelationKind::Antagonism, _) => true,
        (RelationKind::Occurrence, None) => true,
        (RelationKind::Occurrence, Some(x)) => first_is_new || f.never_present(role, x),
        (RelationKind::Existence, None) => false,
        (RelationKind::Existence, Some(x)) => f.never_absent(role, x),
    }
}

/// Extends `f` to order `k` with null vertices and null arcs. Relations of
/// the added elements follow from their being absent in every sample.
pub fn extend_fdg(f: &Fdg, k: usize) -> Result<Fdg> {
    let n = f.order();
    if k < n {
        return Err(Error::InvalidExtension { order: n, target: k });
    }
    if k == n {
        return Ok(f.clone());
    }
    let map: Vec<Option<usize>> = (0..k).map(|i| (i < n).then_some(i)).collect();
    Ok(embed(f, &map, k))
}

/// Places the vertices of `f` at new positions of an FDG of order `k`;
/// `map[new] = Some(old)` for carried vertices and `None` for fresh nulls.
pub(crate) fn embed(f: &Fdg, map: &[Option<usize>], k: usize) -> Fdg {
    let n = f.order();
    let vertex_pdfs: Vec<Pdf> =
        map.iter().map(|m| m.map_or_else(|| Pdf::null_only(f.z as f64), |i| f.vertex_pdfs[i].clone())).collect();
    let mut arc_map = Vec::with_capacity(slots(k));
    for a in 0..k {
        for b in 0..k {
            if a != b {
                arc_map.push(match (map[a], map[b]) {
                    (Some(i), Some(j)) => Some(arc_slot(i, j, n)),
                    _ => None,
                });
            }
        }
    }
    let arc_pdfs = arc_map.iter().map(|m| m.map_or_else(|| Pdf::null_only(0.0), |s| f.arc_pdfs[s].clone())).collect();
    let u = arc_map.iter().map(|m| m.map_or(0, |s| f.u[s])).collect();
    let lift = |role: Role, elems: &[Option<usize>]| {
        let r = f.relations(role);
        let len = elems.len();
        let one = |kind: RelationKind| {
            BoolMatrix::from_fn(len, |x, y| match (elems[x], elems[y]) {
                (Some(i), Some(j)) => r.get(kind).get(i, j),
                (None, Some(j)) => extension_relation(f, role, kind, Some(j), true),
                (Some(i), None) => extension_relation(f, role, kind, Some(i), false),
                (None, None) => extension_relation(f, role, kind, None, true),
            })
        };
        Relations {
            antagonism: one(RelationKind::Antagonism),
            occurrence: one(RelationKind::Occurrence),
            existence: one(RelationKind::Existence),
        }
    };
    let arc_order = f.arc_order.as_ref().map(|o| {
        let mut position = vec![usize::MAX; n];
        for (new, m) in map.iter().enumerate() {
            if let Some(old) = m {
                position[*old] = new;
            }
        }
        map.iter()
            .map(|m| match m {
                Some(i) => o[*i].iter().map(|&j| position[j]).collect(),
                None => Vec::new(),
            })
            .collect()
    });
    Fdg {
        vertex_pdfs,
        arc_pdfs,
        u,
        z: f.z,
        vertex_rel: lift(Role::Vertex, map),
        arc_rel: lift(Role::Arc, &arc_map),
        vertex_binning: f.vertex_binning,
        arc_binning: f.arc_binning,
        arc_order,
    }
}

/// Unconditional probability that arc `(i, j)` takes `value` (`None` = null).
pub fn unconditional_arc_prob(f: &Fdg, i: usize, j: usize, value: Option<&AttrTuple>) -> f64 {
    let s = f.arc_slot(i, j);
    let q = &f.arc_pdfs[s];
    let endpoints = (1.0 - f.vertex_pdfs[i].null_prob()) * (1.0 - f.vertex_pdfs[j].null_prob());
    match value {
        None => 1.0 - (1.0 - q.null_prob()) * endpoints,
        Some(b) if b.is_null() => 1.0 - (1.0 - q.null_prob()) * endpoints,
        Some(b) => q.prob(b, &f.arc_binning) * endpoints,
    }
}

/// Co-occurrence matrices `C = O ∧ Oᵀ` for vertices and arcs.
pub fn co_occurrence(f: &Fdg) -> (BoolMatrix, BoolMatrix) {
    let c = |o: &BoolMatrix| BoolMatrix::from_fn(o.size(), |i, j| o.get(i, j) && o.get(j, i));
    (c(&f.vertex_rel.occurrence), c(&f.arc_rel.occurrence))
}

/// One disagreement found by [`verify_identities`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mismatch {
    /// Stored relation bit differs from the one derived from the sample.
    Relation { role: Role, kind: RelationKind, i: usize, j: usize, stored: bool },
    /// `A(i,j) ∧ O(i,j)` disagrees with `Pr(i = null) = 1`.
    NullIdentity { role: Role, i: usize, j: usize },
    /// `E(i,j) ∧ O(i,j)` disagrees with `Pr(j = null) = 0`.
    StrictIdentity { role: Role, i: usize, j: usize },
}

/// Result of [`verify_identities`]; empty when everything agrees.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IdentityReport {
    pub mismatches: Vec<Mismatch>,
}

impl IdentityReport {
    pub fn is_empty(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Re-derives every relation of `f` from joint null frequencies of the
/// labelled sample and checks the null and strict-element identities.
pub fn verify_identities(f: &Fdg, sample: &[AttributedGraph], labels: &CommonLabelling) -> Result<IdentityReport> {
    let n = f.order();
    let orders: Vec<usize> = sample.iter().map(|g| g.order()).collect();
    labels.check(&orders, n).map_err(|e| Error::InvalidSample(e.to_string()))?;
    if sample.len() as u64 != f.z {
        return Err(Error::InvalidSample(format!("sample has {} graphs but z = {}", sample.len(), f.z)));
    }
    let z = sample.len();
    let mut vpresent = vec![vec![false; n]; z];
    let mut apresent = vec![vec![false; slots(n)]; z];
    for (k, (g, map)) in sample.iter().zip(&labels.maps).enumerate() {
        let mut at = vec![None; n];
        for (v, l) in map.iter().enumerate() {
            if let Some(l) = l {
                at[*l] = Some(v);
                vpresent[k][*l] = !g.vertex(v).is_null();
            }
        }
        for a in 0..n {
            for b in 0..n {
                if a != b {
                    if let (Some(x), Some(y)) = (at[a], at[b]) {
                        apresent[k][arc_slot(a, b, n)] = vpresent[k][a] && vpresent[k][b] && g.has_arc(x, y);
                    }
                }
            }
        }
    }
    let mut report = IdentityReport::default();
    for (role, present, len) in [(Role::Vertex, &vpresent, n), (Role::Arc, &apresent, slots(n))] {
        let rel = f.relations(role);
        for i in 0..len {
            for j in 0..len {
                // Joint frequencies of the four presence patterns.
                let mut joint = [[0usize; 2]; 2];
                for row in present.iter() {
                    joint[row[i] as usize][row[j] as usize] += 1;
                }
                let derived = [
                    (RelationKind::Antagonism, joint[1][1] == 0),
                    (RelationKind::Occurrence, joint[1][0] == 0),
                    (RelationKind::Existence, joint[0][0] == 0),
                ];
                for (kind, value) in derived {
                    let stored = rel.get(kind).get(i, j);
                    if stored != value {
                        report.mismatches.push(Mismatch::Relation { role, kind, i, j, stored });
                    }
                }
                let ao = rel.antagonism.get(i, j) && rel.occurrence.get(i, j);
                if ao != f.never_present(role, i) {
                    report.mismatches.push(Mismatch::NullIdentity { role, i, j });
                }
                let eo = rel.existence.get(i, j) && rel.occurrence.get(i, j);
                if eo != f.never_absent(role, j) {
                    report.mismatches.push(Mismatch::StrictIdentity { role, i, j });
                }
            }
        }
    }
    Ok(report)
}
