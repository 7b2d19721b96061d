//! First-order random graphs and their entropy-increment distance.

use crate::attr::{AttrTuple, Binning};
use crate::error::{Error, Result};
use crate::fdg::{slots, Fdg};
use crate::graph::{arc_slot, AttributedGraph};
use crate::labelling::Labelling;
use crate::pdf::Pdf;
use crate::synthesis::{ag_to_fdg_with, Binnings};

/// Random graph with independent vertex pdfs and arc pdfs conditional on
/// both endpoints existing. No second-order information is kept.
#[derive(Clone, Debug, PartialEq)]
pub struct Forg {
    pub(crate) vertex_pdfs: Vec<Pdf>,
    pub(crate) arc_pdfs: Vec<Pdf>,
    pub(crate) u: Vec<u64>,
    pub(crate) z: u64,
    pub(crate) vertex_binning: Binning,
    pub(crate) arc_binning: Binning,
}

impl Forg {
    pub fn from_parts(
        vertex_pdfs: Vec<Pdf>,
        arc_pdfs: Vec<Pdf>,
        u: Vec<u64>,
        z: u64,
        binnings: Binnings,
    ) -> Result<Forg> {
        let s = slots(vertex_pdfs.len());
        if arc_pdfs.len() != s || u.len() != s {
            return Err(Error::InvalidInput(format!("expected {s} arc slots")));
        }
        Ok(Forg { vertex_pdfs, arc_pdfs, u, z, vertex_binning: binnings.vertex, arc_binning: binnings.arc })
    }

    /// Drops the relations of an FDG.
    pub fn from_fdg(f: &Fdg) -> Forg {
        Forg {
            vertex_pdfs: f.vertex_pdfs.clone(),
            arc_pdfs: f.arc_pdfs.clone(),
            u: f.u.clone(),
            z: f.z,
            vertex_binning: f.vertex_binning,
            arc_binning: f.arc_binning,
        }
    }

    pub fn from_ag(g: &AttributedGraph, binnings: &Binnings) -> Forg {
        Forg::from_fdg(&ag_to_fdg_with(g, binnings))
    }

    pub fn order(&self) -> usize {
        self.vertex_pdfs.len()
    }

    pub fn z(&self) -> u64 {
        self.z
    }

    pub fn binnings(&self) -> Binnings {
        Binnings { vertex: self.vertex_binning, arc: self.arc_binning }
    }

    pub fn vertex_pdf(&self, i: usize) -> &Pdf {
        &self.vertex_pdfs[i]
    }

    pub fn arc_pdf(&self, i: usize, j: usize) -> &Pdf {
        &self.arc_pdfs[arc_slot(i, j, self.order())]
    }

    pub fn u(&self, i: usize, j: usize) -> u64 {
        self.u[arc_slot(i, j, self.order())]
    }
}

/// Sum of the entropies (bits) of every vertex pdf and every conditional
/// arc pdf.
pub fn forg_entropy(r: &Forg) -> f64 {
    r.vertex_pdfs.iter().chain(&r.arc_pdfs).map(Pdf::entropy_bits).sum()
}

fn check_map(r1: &Forg, r2: &Forg, mu: &Labelling) -> Result<Vec<Option<usize>>> {
    if mu.len() != r1.order() {
        return Err(Error::InvalidLabelling("labelling must cover every vertex of the first graph".into()));
    }
    mu.check_injective()?;
    if mu.vertex_map.iter().flatten().any(|t| *t >= r2.order()) {
        return Err(Error::InvalidLabelling("labelling target outside the second graph".into()));
    }
    Ok(mu.inverse(r2.order()).vertex_map)
}

/// Synthesis of `r1` and `r2` where `mu` maps vertices of `r1` onto vertices
/// of `r2` (or leaves them unmatched). The result keeps `r2`'s vertex
/// indices and appends the unmatched vertices of `r1`.
pub fn forg_synthesize(r1: &Forg, r2: &Forg, mu: &Labelling) -> Result<Forg> {
    let inv = check_map(r1, r2, mu)?;
    if r1.vertex_binning != r2.vertex_binning || r1.arc_binning != r2.arc_binning {
        return Err(Error::InvalidInput("random graphs use different bin widths".into()));
    }
    // Merged vertex k = (vertex of r1, vertex of r2).
    let mut parts: Vec<(Option<usize>, Option<usize>)> = inv.iter().enumerate().map(|(b, a)| (*a, Some(b))).collect();
    parts.extend((0..r1.order()).filter(|&a| mu.get(a).is_none()).map(|a| (Some(a), None)));
    let n = parts.len();
    let (z1, z2) = (r1.z as f64, r2.z as f64);
    let n1 = Pdf::null_only(r1.z as f64);
    let n2 = Pdf::null_only(r2.z as f64);
    let vertex_pdfs = parts
        .iter()
        .map(|(a, b)| {
            let p1 = a.map_or(&n1, |a| &r1.vertex_pdfs[a]);
            let p2 = b.map_or(&n2, |b| &r2.vertex_pdfs[b]);
            Pdf::mix(&[(z1, p1), (z2, p2)])
        })
        .collect();
    let empty = Pdf::null_only(0.0);
    let mut arc_pdfs = Vec::with_capacity(slots(n));
    let mut u = Vec::with_capacity(slots(n));
    for x in 0..n {
        for y in 0..n {
            if x == y {
                continue;
            }
            fn side<'a>(r: &'a Forg, p: Option<usize>, q: Option<usize>, empty: &'a Pdf) -> (u64, &'a Pdf) {
                match (p, q) {
                    (Some(p), Some(q)) => {
                        let s = arc_slot(p, q, r.order());
                        (r.u[s], &r.arc_pdfs[s])
                    }
                    _ => (0, empty),
                }
            }
            let (u1, q1) = side(r1, parts[x].0, parts[y].0, &empty);
            let (u2, q2) = side(r2, parts[x].1, parts[y].1, &empty);
            arc_pdfs.push(Pdf::mix(&[(u1 as f64, q1), (u2 as f64, q2)]));
            u.push(u1 + u2);
        }
    }
    Ok(Forg {
        vertex_pdfs,
        arc_pdfs,
        u,
        z: r1.z + r2.z,
        vertex_binning: r2.vertex_binning,
        arc_binning: r2.arc_binning,
    })
}

/// Entropy increment of mixing two element pdfs with weights `w1`, `w2`.
fn increment(w1: f64, p1: &Pdf, w2: f64, p2: &Pdf) -> f64 {
    let w = w1 + w2;
    if w <= 0.0 {
        return 0.0;
    }
    let h = Pdf::mix(&[(w1, p1), (w2, p2)]).entropy_bits();
    (h - (w1 / w) * p1.entropy_bits() - (w2 / w) * p2.entropy_bits()).max(0.0)
}

/// Weighted entropy increment of the synthesis of `r1` and `r2` under `mu`,
/// with unit element weights.
pub fn entropy_increment(r1: &Forg, r2: &Forg, mu: &Labelling) -> Result<f64> {
    let merged = forg_synthesize(r1, r2, mu)?;
    let total = r1.z + r2.z;
    let (t1, t2) = (r1.z as f64 / total as f64, r2.z as f64 / total as f64);
    let inv = check_map(r1, r2, mu)?;
    let mut h = 0.0;
    for (b, a) in inv.iter().enumerate() {
        let h1 = a.map_or(0.0, |a| r1.vertex_pdfs[a].entropy_bits());
        h += merged.vertex_pdfs[b].entropy_bits() - t1 * h1 - t2 * r2.vertex_pdfs[b].entropy_bits();
    }
    for (k, a) in (0..r1.order()).filter(|&a| mu.get(a).is_none()).enumerate() {
        h += merged.vertex_pdfs[r2.order() + k].entropy_bits() - t1 * r1.vertex_pdfs[a].entropy_bits();
    }
    // Arc weights are the per-arc counts, so only arcs present on both
    // sides can contribute.
    for a in 0..r1.order() {
        for c in 0..r1.order() {
            if let (Some(b), Some(d), true) = (mu.get(a), mu.get(c), a != c) {
                let s1 = arc_slot(a, c, r1.order());
                let s2 = arc_slot(b, d, r2.order());
                h += increment(r1.u[s1] as f64, &r1.arc_pdfs[s1], r2.u[s2] as f64, &r2.arc_pdfs[s2]);
            }
        }
    }
    Ok(h)
}

/// Minimum entropy increment over all injective partial vertex maps from
/// `r1` into `r2`, by depth-first search with the partial sum as bound.
/// Ties go to the lexicographically smallest map (unmatched last).
pub fn forg_distance(r1: &Forg, r2: &Forg) -> (f64, Labelling) {
    let n = r1.order();
    let m = r2.order();
    let (z1, z2) = (r1.z as f64, r2.z as f64);
    let null1 = Pdf::null_only(z1);
    let null2 = Pdf::null_only(z2);
    // Vertex increments: pair[a][b] with b == m meaning unmatched.
    let pair: Vec<Vec<f64>> = (0..n)
        .map(|a| {
            (0..=m)
                .map(|b| {
                    let p2 = if b < m { &r2.vertex_pdfs[b] } else { &null2 };
                    increment(z1, &r1.vertex_pdfs[a], z2, p2)
                })
                .collect()
        })
        .collect();
    let lone2: Vec<f64> = (0..m).map(|b| increment(z1, &null1, z2, &r2.vertex_pdfs[b])).collect();
    let arc = |a: usize, c: usize, b: usize, d: usize| {
        let s1 = arc_slot(a, c, n);
        let s2 = arc_slot(b, d, m);
        increment(r1.u[s1] as f64, &r1.arc_pdfs[s1], r2.u[s2] as f64, &r2.arc_pdfs[s2])
    };

    struct State {
        best: f64,
        best_map: Vec<Option<usize>>,
        map: Vec<Option<usize>>,
        used: Vec<bool>,
    }
    fn dfs(
        i: usize,
        g: f64,
        st: &mut State,
        pair: &[Vec<f64>],
        lone2: &[f64],
        arc: &dyn Fn(usize, usize, usize, usize) -> f64,
    ) {
        let n = pair.len();
        let m = lone2.len();
        if g > st.best + 1e-12 {
            return;
        }
        if i == n {
            let total = g + (0..m).filter(|&b| !st.used[b]).map(|b| lone2[b]).sum::<f64>();
            let better = total < st.best - 1e-12
                || (total <= st.best + 1e-12 && key(&st.map) < key(&st.best_map));
            if better {
                st.best = total;
                st.best_map = st.map.clone();
            }
            return;
        }
        for b in 0..=m {
            if b < m && st.used[b] {
                continue;
            }
            let mut cost = pair[i][b];
            if b < m {
                for c in 0..i {
                    if let Some(d) = st.map[c] {
                        cost += arc(i, c, b, d) + arc(c, i, d, b);
                    }
                }
                st.used[b] = true;
            }
            st.map[i] = (b < m).then_some(b);
            dfs(i + 1, g + cost, st, pair, lone2, arc);
            if b < m {
                st.used[b] = false;
            }
        }
        st.map[i] = None;
    }
    fn key(map: &[Option<usize>]) -> Vec<usize> {
        map.iter().map(|t| t.unwrap_or(usize::MAX)).collect()
    }

    let mut st = State { best: f64::INFINITY, best_map: vec![None; n], map: vec![None; n], used: vec![false; m] };
    dfs(0, 0.0, &mut st, &pair, &lone2, &arc);
    (st.best, Labelling::new(st.best_map))
}

/// Probability of the outcome `g` when its vertices are oriented onto `r` by
/// `mu`. Vertices of `r` without a preimage must be null in the outcome, so
/// they contribute their null probability; a non-null vertex of `g` without
/// an image makes the outcome impossible.
pub fn outcome_probability(r: &Forg, g: &AttributedGraph, mu: &Labelling) -> Result<f64> {
    let inv = check_map_ag(r, g, mu)?;
    let null = AttrTuple::null();
    if (0..g.order()).any(|v| mu.get(v).is_none() && !g.vertex(v).is_null()) {
        return Ok(0.0);
    }
    let value = |b: usize| inv[b].map_or(&null, |v| g.vertex(v));
    let mut p = 1.0;
    for b in 0..r.order() {
        p *= r.vertex_pdfs[b].prob(value(b), &r.vertex_binning);
    }
    for x in 0..r.order() {
        for y in 0..r.order() {
            if x == y || value(x).is_null() || value(y).is_null() {
                continue;
            }
            let b = g.arc(inv[x].unwrap(), inv[y].unwrap()).unwrap_or(&null);
            p *= r.arc_pdfs[arc_slot(x, y, r.order())].prob(b, &r.arc_binning);
        }
    }
    Ok(p)
}

fn check_map_ag(r: &Forg, g: &AttributedGraph, mu: &Labelling) -> Result<Vec<Option<usize>>> {
    if mu.len() != g.order() {
        return Err(Error::InvalidLabelling("labelling must cover every vertex of the graph".into()));
    }
    mu.check_injective()?;
    if mu.vertex_map.iter().flatten().any(|t| *t >= r.order()) {
        return Err(Error::InvalidLabelling("labelling target outside the random graph".into()));
    }
    Ok(mu.inverse(r.order()).vertex_map)
}
