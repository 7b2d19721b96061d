//! Unsupervised construction of FDGs from unlabelled attributed graphs.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;

use crate::baseline::{edit_distance, EditCosts};
use crate::efficient::{suboptimal_distance, SubMethod};
use crate::error::{Error, Result};
use crate::fdg::{extend_fdg, Fdg};
use crate::graph::{extend_ag, AttributedGraph};
use crate::labelling::{CommonLabelling, Labelling};
use crate::matching::{bnb_distance, MatchResult};
use crate::synthesis::{ag_to_fdg_with, synth_from_labelled_fdgs, update_fdg_with_ag, Binnings};
use crate::weights::{ConstraintMode, CostWeights};

/// Pads a map of `n` sources into `m` targets to a bijection: unlabelled
/// sources take new target positions `m..`, new source positions `n..`
/// take the unlabelled targets in index order.
fn complete_map(mu: &Labelling, n: usize, m: usize) -> Result<(usize, usize, Labelling)> {
    if mu.len() != n {
        return Err(Error::InvalidLabelling(format!("labelling covers {} of {n} vertices", mu.len())));
    }
    mu.check_injective()?;
    if mu.vertex_map.iter().flatten().any(|t| *t >= m) {
        return Err(Error::InvalidLabelling("target outside the second structure".into()));
    }
    let mut hit = vec![false; m];
    for t in mu.vertex_map.iter().flatten() {
        hit[*t] = true;
    }
    let mut next = m;
    let mut map: Vec<Option<usize>> = mu
        .vertex_map
        .iter()
        .map(|t| {
            Some(t.unwrap_or_else(|| {
                next += 1;
                next - 1
            }))
        })
        .collect();
    map.extend((0..m).filter(|t| !hit[*t]).map(Some));
    let size = map.len();
    Ok((size, size, Labelling::new(map)))
}

/// Extends an AG and an FDG with null vertices so that `mu` becomes a
/// bijection. A bijective `mu` returns the inputs unchanged.
pub fn extend_labelling_ag_fdg(
    g: &AttributedGraph,
    f: &Fdg,
    mu: &Labelling,
) -> Result<(AttributedGraph, Fdg, Labelling)> {
    let (n, m) = (g.order(), f.order());
    let (n2, m2, map) = complete_map(mu, n, m)?;
    if n2 == n && m2 == m {
        return Ok((g.clone(), f.clone(), mu.clone()));
    }
    Ok((extend_ag(g, n2)?, extend_fdg(f, m2)?, map))
}

/// Extends two FDGs with null vertices so that `phi` becomes a bijection.
pub fn extend_labelling_fdg_fdg(f: &Fdg, h: &Fdg, phi: &Labelling) -> Result<(Fdg, Fdg, Labelling)> {
    let (n, m) = (f.order(), h.order());
    let (n2, m2, map) = complete_map(phi, n, m)?;
    if n2 == n && m2 == m {
        return Ok((f.clone(), h.clone(), phi.clone()));
    }
    Ok((extend_fdg(f, n2)?, extend_fdg(h, m2)?, map))
}

/// AG-to-FDG matcher used by incremental clustering.
#[derive(Clone, Debug)]
pub struct IncrementalConfig {
    /// `K3..K8` are forced to zero.
    pub weights: CostWeights,
    /// Sub-optimal method; exact branch and bound when `None`.
    pub method: Option<SubMethod>,
    pub binnings: Binnings,
}

impl Default for IncrementalConfig {
    fn default() -> Self {
        IncrementalConfig { weights: CostWeights::default(), method: None, binnings: Binnings::default() }
    }
}

impl IncrementalConfig {
    fn first_order_weights(&self) -> CostWeights {
        let mut w = self.weights.clone();
        for k in &mut w.k[2..] {
            *k = 0.0;
        }
        w.mode = ConstraintMode::Relaxed;
        w
    }

    fn matcher(&self, g: &AttributedGraph, f: &Fdg, w: &CostWeights) -> Result<MatchResult> {
        match self.method {
            None => bnb_distance(g, f, w),
            Some(m) => suboptimal_distance(g, f, w, m),
        }
    }
}

/// Clusters and the input graphs behind each one.
#[derive(Clone, Debug)]
pub struct Clustering {
    pub fdgs: Vec<Fdg>,
    /// Input indices per cluster, ascending.
    pub provenance: Vec<Vec<usize>>,
    /// `(absorbed, survivor, distance)` in merge order (hierarchical only).
    pub merges: Vec<(usize, usize, f64)>,
}

/// Processes `seq` in order: each graph joins its nearest FDG (lowest index
/// on ties) when the distance is at most `d_alpha`, else seeds a new FDG.
pub fn incremental_clustering(seq: &[AttributedGraph], cfg: &IncrementalConfig, d_alpha: f64) -> Result<Clustering> {
    if seq.is_empty() {
        return Err(Error::InvalidInput("nothing to cluster".into()));
    }
    let w = cfg.first_order_weights();
    w.validate()?;
    let mut fdgs = vec![ag_to_fdg_with(&seq[0], &cfg.binnings)];
    let mut provenance = vec![vec![0]];
    for (i, g) in seq.iter().enumerate().skip(1) {
        let results: Vec<MatchResult> =
            fdgs.par_iter().map(|f| cfg.matcher(g, f, &w)).collect::<Result<_>>()?;
        let mut best: Option<(usize, f64)> = None;
        for (j, r) in results.iter().enumerate() {
            if r.valid && best.is_none_or(|(_, d)| r.distance < d) {
                best = Some((j, r.distance));
            }
        }
        match best {
            Some((x, d)) if d <= d_alpha => {
                fdgs[x] = update_fdg_with_ag(g, &fdgs[x], &results[x].labelling)?;
                provenance[x].push(i);
            }
            _ => {
                fdgs.push(ag_to_fdg_with(g, &cfg.binnings));
                provenance.push(vec![i]);
            }
        }
    }
    Ok(Clustering { fdgs, provenance, merges: Vec::new() })
}

/// Rule for the distance between a merged cluster and the others.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Linkage {
    /// Closest members.
    Single,
    /// Farthest members.
    Complete,
}

impl FromStr for Linkage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single" => Ok(Linkage::Single),
            "complete" => Ok(Linkage::Complete),
            _ => Err(Error::Config(format!("unknown linkage `{s}`"))),
        }
    }
}

type AgMatcher = dyn Fn(&AttributedGraph, &AttributedGraph) -> Result<(f64, Labelling)> + Send + Sync;

/// Distance and labelling between two AGs.
#[derive(Clone)]
pub enum AgDistance {
    Edit(EditCosts),
    Custom(Arc<AgMatcher>),
}

impl fmt::Debug for AgDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AgDistance::Edit(c) => f.debug_tuple("Edit").field(c).finish(),
            AgDistance::Custom(_) => f.write_str("Custom"),
        }
    }
}

impl Default for AgDistance {
    fn default() -> Self {
        AgDistance::Edit(EditCosts::default())
    }
}

impl AgDistance {
    pub fn eval(&self, a: &AttributedGraph, b: &AttributedGraph) -> Result<(f64, Labelling)> {
        match self {
            AgDistance::Edit(c) => edit_distance(a, b, c),
            AgDistance::Custom(f) => f(a, b),
        }
    }
}

/// Live clusters with their pairwise distances and labellings.
#[derive(Clone, Debug)]
pub struct ClusterState {
    /// `None` once a cluster has been absorbed.
    pub fdgs: Vec<Option<Fdg>>,
    /// Symmetric; infinite on the diagonal and for absorbed clusters.
    pub distance: Vec<Vec<f64>>,
    /// `labelling[i][j]` maps cluster `i` into cluster `j`.
    pub labelling: Vec<Vec<Labelling>>,
    pub provenance: Vec<Vec<usize>>,
}

impl ClusterState {
    /// Singleton clusters from all pairwise AG distances and labellings.
    pub fn initial(set: &[AttributedGraph], dist: &AgDistance, binnings: &Binnings) -> Result<ClusterState> {
        let m = set.len();
        let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
        let found: Vec<(f64, Labelling)> =
            pairs.par_iter().map(|&(i, j)| dist.eval(&set[i], &set[j])).collect::<Result<_>>()?;
        let mut distance = vec![vec![f64::INFINITY; m]; m];
        let mut labelling: Vec<Vec<Labelling>> =
            (0..m).map(|i| (0..m).map(|_| Labelling::new(vec![None; set[i].order()])).collect()).collect();
        for (&(i, j), (d, f)) in pairs.iter().zip(found) {
            if !(d >= 0.0) {
                return Err(Error::InvalidInput(format!("negative or undefined distance between {i} and {j}")));
            }
            distance[i][j] = d;
            distance[j][i] = d;
            labelling[j][i] = f.inverse(set[j].order());
            labelling[i][j] = f;
        }
        Ok(ClusterState {
            fdgs: set.iter().map(|g| Some(ag_to_fdg_with(g, binnings))).collect(),
            distance,
            labelling,
            provenance: (0..m).map(|i| vec![i]).collect(),
        })
    }

    /// Closest live pair, lexicographically smallest on ties.
    pub fn closest(&self) -> Option<(usize, usize, f64)> {
        let m = self.fdgs.len();
        let mut best: Option<(usize, usize, f64)> = None;
        for i in 0..m {
            for j in i + 1..m {
                let d = self.distance[i][j];
                if d.is_finite() && best.is_none_or(|b| d < b.2) {
                    best = Some((i, j, d));
                }
            }
        }
        best
    }

    /// Merges cluster `x` into cluster `y` and updates distances and
    /// labellings under `linkage`.
    pub fn merge(&mut self, x: usize, y: usize, linkage: Linkage) -> Result<()> {
        let fx = self.fdgs[x].take().ok_or_else(|| Error::InvalidIndex(format!("cluster {x} is not live")))?;
        let fy = self.fdgs[y].take().ok_or_else(|| Error::InvalidIndex(format!("cluster {y} is not live")))?;
        let my = fy.order();
        let (_, _, phi) = complete_map(&self.labelling[x][y], fx.order(), my)?;
        let size = phi.len().max(my);
        let phi = Labelling::new(phi.vertex_map[..fx.order()].to_vec());
        let labels = CommonLabelling::new(vec![(0..my).map(Some).collect(), phi.vertex_map.clone()]);
        let merged = synth_from_labelled_fdgs(&[fy, fx], &labels, Some(size))?;
        let back = phi.inverse(size);
        for i in 0..self.fdgs.len() {
            if i == x || i == y || self.fdgs[i].is_none() {
                continue;
            }
            let (dx, dy) = (self.distance[i][x], self.distance[i][y]);
            let take_x = match linkage {
                Linkage::Complete => dx > dy,
                Linkage::Single => dx < dy,
            };
            if take_x {
                self.distance[i][y] = dx;
                self.distance[y][i] = dx;
                self.labelling[i][y] = self.labelling[i][x].then(&phi);
                self.labelling[y][i] = back.then(&self.labelling[x][i]);
            } else {
                self.labelling[y][i].vertex_map.resize(size, None);
            }
            self.distance[i][x] = f64::INFINITY;
            self.distance[x][i] = f64::INFINITY;
        }
        self.distance[x][y] = f64::INFINITY;
        self.distance[y][x] = f64::INFINITY;
        self.fdgs[y] = Some(merged);
        let moved = std::mem::take(&mut self.provenance[x]);
        self.provenance[y].extend(moved);
        self.provenance[y].sort_unstable();
        Ok(())
    }

    pub fn into_clustering(self, merges: Vec<(usize, usize, f64)>) -> Clustering {
        let mut fdgs = Vec::new();
        let mut provenance = Vec::new();
        for (f, p) in self.fdgs.into_iter().zip(self.provenance) {
            if let Some(f) = f {
                fdgs.push(f);
                provenance.push(p);
            }
        }
        Clustering { fdgs, provenance, merges }
    }
}

/// Agglomerative clustering: repeatedly merges the closest pair while its
/// distance is at most `d_alpha`.
pub fn hierarchical_clustering(
    set: &[AttributedGraph],
    dist: &AgDistance,
    d_alpha: f64,
    linkage: Linkage,
    binnings: &Binnings,
) -> Result<Clustering> {
    if set.is_empty() {
        return Err(Error::InvalidInput("nothing to cluster".into()));
    }
    let mut state = ClusterState::initial(set, dist, binnings)?;
    let mut merges = Vec::new();
    while let Some((x, y, d)) = state.closest() {
        if d > d_alpha {
            break;
        }
        state.merge(x, y, linkage)?;
        merges.push((x, y, d));
    }
    Ok(state.into_clustering(merges))
}
