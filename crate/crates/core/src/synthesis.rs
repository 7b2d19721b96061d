//! Building FDGs from commonly labelled AGs and merging commonly labelled FDGs.

use crate::attr::{AttrTuple, Binning};
use crate::error::{Error, Result};
use crate::fdg::{embed, slots, Fdg, Relations};
use crate::graph::{arc_slot, AttributedGraph};
use crate::labelling::Labelling;
use crate::pdf::Pdf;

pub use crate::labelling::CommonLabelling;

/// Bin widths used when estimating vertex and arc pdfs.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Binnings {
    pub vertex: Binning,
    pub arc: Binning,
}

impl Binnings {
    pub fn new(vertex: f64, arc: f64) -> Self {
        Binnings { vertex: Binning::new(vertex), arc: Binning::new(arc) }
    }
}

fn target_order(labels: &CommonLabelling, n: Option<usize>) -> Result<usize> {
    let needed = labels.label_bound();
    match n {
        None => Ok(needed),
        Some(n) if n >= needed => Ok(n),
        Some(n) => Err(Error::InvalidExtension { order: needed, target: n }),
    }
}

/// For each label, the source element carrying it (`None` if none does).
fn positions(map: &[Option<usize>], n: usize) -> Vec<Option<usize>> {
    let mut at = vec![None; n];
    for (v, l) in map.iter().enumerate() {
        if let Some(l) = l {
            at[*l] = Some(v);
        }
    }
    at
}

/// Arc order in label space, when every input that has a given vertex
/// present agrees on its cyclic list of targets.
fn agree_on_order(lists: impl Iterator<Item = Option<Vec<Option<Vec<usize>>>>>, n: usize) -> Option<Vec<Vec<usize>>> {
    let mut out: Vec<Option<Vec<usize>>> = vec![None; n];
    for per_input in lists {
        let per_input = per_input?;
        for (l, entry) in per_input.into_iter().enumerate() {
            if let Some(list) = entry {
                match &out[l] {
                    None => out[l] = Some(list),
                    Some(prev) if *prev == list => {}
                    Some(_) => return None,
                }
            }
        }
    }
    Some(out.into_iter().map(Option::unwrap_or_default).collect())
}

/// Synthesises an FDG of order `n` (default: one past the largest label)
/// from commonly labelled AGs with unit bin widths.
pub fn synth_from_labelled_ags(d: &[AttributedGraph], labels: &CommonLabelling, n: Option<usize>) -> Result<Fdg> {
    synth_from_labelled_ags_with(d, labels, n, &Binnings::default())
}

/// [`synth_from_labelled_ags`] with explicit bin widths.
pub fn synth_from_labelled_ags_with(
    d: &[AttributedGraph],
    labels: &CommonLabelling,
    n: Option<usize>,
    binnings: &Binnings,
) -> Result<Fdg> {
    if d.is_empty() {
        return Err(Error::InvalidInput("cannot synthesise from an empty set of graphs".into()));
    }
    let n = target_order(labels, n)?;
    let orders: Vec<usize> = d.iter().map(|g| g.order()).collect();
    labels.check(&orders, n)?;
    for (k, (g, map)) in d.iter().zip(&labels.maps).enumerate() {
        if let Some(v) = (0..g.order()).find(|&v| map[v].is_none() && !g.vertex(v).is_null()) {
            return Err(Error::InvalidLabelling(format!("graph {k}: non-null vertex {v} has no label")));
        }
    }
    let z = d.len();
    let at: Vec<Vec<Option<usize>>> = labels.maps.iter().map(|m| positions(m, n)).collect();
    let null = AttrTuple::null();

    // Vertex values in label space; an unlabelled position is null.
    let value = |k: usize, l: usize| -> &AttrTuple { at[k][l].map_or(&null, |v| d[k].vertex(v)) };
    let vpresent: Vec<Vec<bool>> = (0..z).map(|k| (0..n).map(|l| !value(k, l).is_null()).collect()).collect();
    let vertex_pdfs: Vec<Pdf> =
        (0..n).map(|l| Pdf::from_samples((0..z).map(|k| value(k, l)), &binnings.vertex)).collect();

    let s = slots(n);
    let mut arc_pdfs = Vec::with_capacity(s);
    let mut u = Vec::with_capacity(s);
    let mut apresent = vec![vec![false; s]; z];
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let slot = arc_slot(a, b, n);
            let mut vals = Vec::new();
            for k in 0..z {
                if vpresent[k][a] && vpresent[k][b] {
                    let (x, y) = (at[k][a].unwrap(), at[k][b].unwrap());
                    let v = d[k].arc(x, y).unwrap_or(&null);
                    apresent[k][slot] = !v.is_null();
                    vals.push(v);
                }
            }
            u.push(vals.len() as u64);
            arc_pdfs.push(if vals.is_empty() {
                Pdf::null_only(0.0)
            } else {
                Pdf::from_samples(vals.into_iter(), &binnings.arc)
            });
        }
    }

    let mut f = Fdg::from_parts(
        vertex_pdfs,
        arc_pdfs,
        u,
        z as u64,
        Relations::from_presence(&vpresent, n),
        Relations::from_presence(&apresent, s),
        binnings.vertex,
        binnings.arc,
    )?;
    let orders = d.iter().zip(&at).map(|(g, at)| {
        let o = g.arc_order()?;
        let label_of = |v: usize| labels_of(at, v);
        Some(
            at.iter()
                .map(|v| {
                    v.filter(|&v| !g.vertex(v).is_null())
                        .map(|v| o[v].iter().map(|&t| label_of(t)).collect::<Vec<usize>>())
                })
                .collect(),
        )
    });
    f.arc_order = agree_on_order(orders, n);
    Ok(f)
}

fn labels_of(at: &[Option<usize>], v: usize) -> usize {
    at.iter().position(|x| *x == Some(v)).expect("ordered arc target carries a label")
}

/// Merges commonly labelled FDGs into one FDG of order `n`. Vertex pdfs are
/// mixed by sample counts `z`, arc pdfs by per-arc counts `u`, relations are
/// conjoined after extending every input to the common label space.
pub fn synth_from_labelled_fdgs(d: &[Fdg], labels: &CommonLabelling, n: Option<usize>) -> Result<Fdg> {
    if d.is_empty() {
        return Err(Error::InvalidInput("cannot merge an empty set of FDGs".into()));
    }
    let n = target_order(labels, n)?;
    let orders: Vec<usize> = d.iter().map(|f| f.order()).collect();
    labels.check(&orders, n)?;
    for (k, (f, map)) in d.iter().zip(&labels.maps).enumerate() {
        if let Some(v) = (0..f.order()).find(|&v| map[v].is_none() && f.vertex_pdf(v).null_prob() < 1.0) {
            return Err(Error::InvalidLabelling(format!("FDG {k}: vertex {v} has no label")));
        }
        if f.vertex_binning != d[0].vertex_binning || f.arc_binning != d[0].arc_binning {
            return Err(Error::InvalidInput(format!("FDG {k} uses different bin widths")));
        }
    }
    let ext: Vec<Fdg> = d.iter().zip(&labels.maps).map(|(f, m)| embed(f, &positions(m, n), n)).collect();

    let vertex_pdfs = (0..n)
        .map(|l| Pdf::mix(&ext.iter().map(|f| (f.z as f64, &f.vertex_pdfs[l])).collect::<Vec<_>>()))
        .collect();
    let s = slots(n);
    let arc_pdfs = (0..s)
        .map(|j| {
            let parts: Vec<(f64, &Pdf)> = ext.iter().map(|f| (f.u[j] as f64, &f.arc_pdfs[j])).collect();
            Pdf::mix(&parts)
        })
        .collect();
    let u = (0..s).map(|j| ext.iter().map(|f| f.u[j]).sum()).collect();
    let z = ext.iter().map(|f| f.z).sum();
    let mut vertex_rel = ext[0].vertex_rel.clone();
    let mut arc_rel = ext[0].arc_rel.clone();
    for f in &ext[1..] {
        vertex_rel = vertex_rel.and(&f.vertex_rel);
        arc_rel = arc_rel.and(&f.arc_rel);
    }
    let mut out =
        Fdg::from_parts(vertex_pdfs, arc_pdfs, u, z, vertex_rel, arc_rel, d[0].vertex_binning, d[0].arc_binning)?;
    let order_lists = ext.iter().map(|f| {
        let o = f.arc_order.as_ref()?;
        Some((0..n).map(|l| (f.vertex_pdfs[l].null_prob() < 1.0).then(|| o[l].clone())).collect())
    });
    out.arc_order = agree_on_order(order_lists, n);
    Ok(out)
}

/// Single-graph FDG: every pdf is degenerate at the graph's own value.
pub fn ag_to_fdg(g: &AttributedGraph) -> Fdg {
    ag_to_fdg_with(g, &Binnings::default())
}

pub fn ag_to_fdg_with(g: &AttributedGraph, binnings: &Binnings) -> Fdg {
    let labels = CommonLabelling::identity(&[g.order()]);
    synth_from_labelled_ags_with(std::slice::from_ref(g), &labels, Some(g.order()), binnings)
        .expect("identity labelling of a single graph is always valid")
}

/// Adds one AG to an FDG under the vertex map `mu` (G vertex to F vertex or
/// unmatched). Unmatched non-null vertices of G become new FDG vertices
/// appended after F's vertices.
pub fn update_fdg_with_ag(g: &AttributedGraph, f: &Fdg, mu: &Labelling) -> Result<Fdg> {
    if mu.len() != g.order() {
        return Err(Error::InvalidLabelling(format!(
            "labelling covers {} vertices but the graph has {}",
            mu.len(),
            g.order()
        )));
    }
    mu.check_injective()?;
    if let Some(t) = mu.vertex_map.iter().flatten().find(|t| **t >= f.order()) {
        return Err(Error::InvalidLabelling(format!("target {t} outside the FDG")));
    }
    let mut next = f.order();
    let g_labels: Vec<Option<usize>> = (0..g.order())
        .map(|v| match mu.get(v) {
            Some(t) => Some(t),
            None if g.vertex(v).is_null() => None,
            None => {
                next += 1;
                Some(next - 1)
            }
        })
        .collect();
    let h = ag_to_fdg_with(g, &Binnings { vertex: f.vertex_binning, arc: f.arc_binning });
    let labels = CommonLabelling::new(vec![(0..f.order()).map(Some).collect(), g_labels]);
    synth_from_labelled_fdgs(&[f.clone(), h], &labels, Some(next))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fdg::RelationKind;

    fn g1() -> AttributedGraph {
        AttributedGraph::new(vec![AttrTuple::cat(1), AttrTuple::cat(2)], [((0, 1), AttrTuple::cat(7))]).unwrap()
    }

    #[test]
    fn single_graph_is_degenerate() {
        let f = ag_to_fdg(&g1());
        assert_eq!(f.z(), 1);
        assert_eq!(f.arc_slots(), 2);
        assert_eq!(f.arc_pdf(1, 0).null_prob(), 1.0);
        assert_eq!(f.u(1, 0), 1);
        assert_eq!(f.relations(crate::fdg::Role::Vertex).antagonism.count_ones(), 0);
    }

    #[test]
    fn update_with_self_keeps_pdfs() {
        let f = ag_to_fdg(&g1());
        let f2 = update_fdg_with_ag(&g1(), &f, &Labelling::identity(2)).unwrap();
        assert_eq!(f2.z(), 2);
        assert_eq!(f2.vertex_pdf(0).prob(&AttrTuple::cat(1), f2.vertex_binning()), 1.0);
        assert_eq!(f2.relations(crate::fdg::Role::Vertex), f.relations(crate::fdg::Role::Vertex));
    }

    #[test]
    fn unmatched_vertex_appends() {
        let f = ag_to_fdg(&g1());
        let f2 = update_fdg_with_ag(&g1(), &f, &Labelling::new(vec![Some(0), None])).unwrap();
        assert_eq!(f2.order(), 3);
        assert_eq!(f2.vertex_pdf(2).null_prob(), 0.5);
        assert_eq!(f2.vertex_pdf(1).null_prob(), 0.5);
        assert!(f2.relations(crate::fdg::Role::Vertex).get(RelationKind::Antagonism).get(1, 2));
    }

    #[test]
    fn empty_input_rejected() {
        assert!(synth_from_labelled_ags(&[], &CommonLabelling::new(vec![]), None).is_err());
        let dup = CommonLabelling::new(vec![vec![Some(0), Some(0)]]);
        assert!(matches!(synth_from_labelled_ags(&[g1()], &dup, None), Err(Error::InvalidLabelling(_))));
    }
}
