#![allow(dead_code)]

pub mod oracle;

use fdg::{AttrTuple, AttributedGraph, CommonLabelling, Fdg};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Plain AG with categorical attributes drawn from `0..domain`.
pub fn random_ag(rng: &mut ChaCha8Rng, n: usize, arc_prob: f64, domain: u32) -> AttributedGraph {
    let vertices = (0..n).map(|_| AttrTuple::cat(rng.random_range(0..domain))).collect();
    let mut arcs = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.random_bool(arc_prob) {
                arcs.push(((i, j), AttrTuple::cat(rng.random_range(0..domain))));
            }
        }
    }
    AttributedGraph::new(vertices, arcs).unwrap()
}

/// Attaches a random cyclic order of outgoing arcs.
pub fn with_random_order(rng: &mut ChaCha8Rng, g: AttributedGraph) -> AttributedGraph {
    let order = (0..g.order())
        .map(|i| {
            let mut t: Vec<usize> = g.out_neighbours(i).collect();
            t.shuffle(rng);
            t
        })
        .collect();
    g.with_arc_order(order).unwrap()
}

/// Sample of `z` AGs over `n` labels: each graph keeps every label with
/// probability `keep` and draws fresh attributes.
pub fn random_sample(
    rng: &mut ChaCha8Rng,
    n: usize,
    z: usize,
    keep: f64,
    arc_prob: f64,
    domain: u32,
) -> (Vec<AttributedGraph>, CommonLabelling) {
    let mut graphs = Vec::new();
    let mut maps = Vec::new();
    for _ in 0..z {
        let mut labels: Vec<usize> = (0..n).filter(|_| rng.random_bool(keep)).collect();
        if labels.is_empty() {
            labels.push(rng.random_range(0..n));
        }
        labels.shuffle(rng);
        let g = random_ag(rng, labels.len(), arc_prob, domain);
        graphs.push(g);
        maps.push(labels.into_iter().map(Some).collect());
    }
    (graphs, CommonLabelling::new(maps))
}

/// FDG of order `n` synthesised from a random sample of `z` graphs.
pub fn random_fdg(rng: &mut ChaCha8Rng, n: usize, z: usize) -> Fdg {
    let (d, l) = random_sample(rng, n, z, 0.7, 0.5, 3);
    fdg::synth_from_labelled_ags(&d, &l, Some(n)).unwrap()
}

/// Random cyclic order over the existing arcs of an FDG.
pub fn fdg_with_random_order(rng: &mut ChaCha8Rng, f: Fdg) -> Fdg {
    let order = (0..f.order())
        .map(|i| {
            let mut t = (0..f.order()).filter(|&j| j != i && f.arc_exists(i, j)).collect::<Vec<_>>();
            t.shuffle(rng);
            t
        })
        .collect();
    f.with_arc_order(order).unwrap()
}

/// Vertex codes a..e and arc codes X, Y, Z, L, K of the five-vertex
/// worked example.
pub mod worked {
    use fdg::{AttrTuple, AttributedGraph, CommonLabelling};

    pub const A: u32 = 0;
    pub const B: u32 = 1;
    pub const C: u32 = 2;
    pub const D: u32 = 3;
    pub const E: u32 = 4;
    pub const X: u32 = 0;
    pub const Y: u32 = 1;
    pub const Z: u32 = 2;
    pub const L: u32 = 3;
    pub const K: u32 = 4;

    /// Graph over a subset of the labels v1..v5 (0-based), given as
    /// `(label, code)` vertices and `(label, label, code)` arcs.
    pub fn graph(vertices: &[(usize, u32)], arcs: &[(usize, usize, u32)]) -> (AttributedGraph, Vec<Option<usize>>) {
        let pos = |l: usize| vertices.iter().position(|v| v.0 == l).unwrap();
        let g = AttributedGraph::new(
            vertices.iter().map(|v| AttrTuple::cat(v.1)).collect(),
            arcs.iter().map(|&(i, j, c)| ((pos(i), pos(j)), AttrTuple::cat(c))).collect::<Vec<_>>(),
        )
        .unwrap();
        (g, vertices.iter().map(|v| Some(v.0)).collect())
    }

    const CORE_V: [(usize, u32); 3] = [(0, B), (1, A), (2, C)];
    const CORE_E: [(usize, usize, u32); 3] = [(1, 0, X), (1, 2, Y), (0, 2, Z)];

    fn with(extra_v: &[(usize, u32)], extra_e: &[(usize, usize, u32)]) -> (AttributedGraph, Vec<Option<usize>>) {
        let v: Vec<_> = CORE_V.iter().chain(extra_v).copied().collect();
        let e: Vec<_> = CORE_E.iter().chain(extra_e).copied().collect();
        graph(&v, &e)
    }

    /// `A_1`: core plus v4 = d with arc v2 -> v4 = K.
    pub fn a1() -> (AttributedGraph, Vec<Option<usize>>) {
        with(&[(3, D)], &[(1, 3, K)])
    }

    /// `A_2`: core plus v5 = e with arc v1 -> v5 = L.
    pub fn a2() -> (AttributedGraph, Vec<Option<usize>>) {
        with(&[(4, E)], &[(0, 4, L)])
    }

    /// `G_1`: the shared core only.
    pub fn g1() -> (AttributedGraph, Vec<Option<usize>>) {
        with(&[], &[])
    }

    /// `G_2 = A_1`.
    pub fn g2() -> (AttributedGraph, Vec<Option<usize>>) {
        a1()
    }

    /// `G_3`: union of `A_1` and `A_2`.
    pub fn g3() -> (AttributedGraph, Vec<Option<usize>>) {
        with(&[(3, D), (4, E)], &[(1, 3, K), (0, 4, L)])
    }

    /// `A_1`, `A_2` and their common labelling.
    pub fn pair() -> (Vec<AttributedGraph>, CommonLabelling) {
        let (g1, l1) = a1();
        let (g2, l2) = a2();
        (vec![g1, g2], CommonLabelling::new(vec![l1, l2]))
    }
}
