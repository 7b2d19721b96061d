//! Independent reference computations shared by the integration tests.

use fdg::efficient::{AgExpandedVertex, FdgExpandedVertex};
use fdg::CostWeights;

pub fn prob_cost(p: f64, kpr: f64) -> f64 {
    if p >= kpr {
        p.ln() / kpr.ln()
    } else {
        1.0
    }
}

/// Every monotone alignment of two strings, every rotation of the first.
pub fn expanded_brute_force(ev: &AgExpandedVertex, ew: &FdgExpandedVertex, w: &CostWeights) -> f64 {
    let (k1, k2, kpr) = (w.k[0], w.k[1], w.k_pr);
    let central = k1 * prob_cost(ew.central.prob(&ev.central, &ew.vertex_binning), kpr);
    let n = ev.externals.len();
    fn walk(
        ev: &AgExpandedVertex,
        ew: &FdgExpandedVertex,
        rot: usize,
        x: usize,
        y: usize,
        acc: f64,
        c: (f64, f64, f64),
        best: &mut f64,
    ) {
        let n = ev.externals.len();
        let m = ew.externals.len();
        let (k1, k2, kpr) = c;
        if x == n && y == m {
            *best = best.min(acc);
            return;
        }
        if x < n {
            walk(ev, ew, rot, x + 1, y, acc + k1 + k2, c, best);
        }
        if y < m {
            let d = k1 * prob_cost(ew.externals[y].2.null_prob(), kpr);
            walk(ev, ew, rot, x, y + 1, acc + d, c, best);
        }
        if x < n && y < m {
            let (_, b, a) = &ev.externals[(x + rot) % n];
            let (_, q, p) = &ew.externals[y];
            let s = k1 * prob_cost(p.prob(a, &ew.vertex_binning), kpr) + k2 * prob_cost(q.prob(b, &ew.arc_binning), kpr);
            walk(ev, ew, rot, x + 1, y + 1, acc + s, c, best);
        }
    }
    let mut best = f64::INFINITY;
    for rot in 0..n.max(1) {
        walk(ev, ew, rot, 0, 0, central, (k1, k2, kpr), &mut best);
    }
    best
}

/// Labellings and search-tree nodes counted by walking every injective
/// partial map.
pub fn search_walk(n: usize, m: usize) -> (u128, u128) {
    fn go(i: usize, n: usize, used: &mut Vec<bool>, leaves: &mut u128, nodes: &mut u128) {
        *nodes += 1;
        if i == n {
            *leaves += 1;
            return;
        }
        for t in 0..used.len() {
            if !used[t] {
                used[t] = true;
                go(i + 1, n, used, leaves, nodes);
                used[t] = false;
            }
        }
        go(i + 1, n, used, leaves, nodes);
    }
    let (mut leaves, mut nodes) = (0, 0);
    go(0, n, &mut vec![false; m], &mut leaves, &mut nodes);
    (leaves, nodes)
}

