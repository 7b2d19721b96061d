//! Random model graphs, noise models and histogram smoothing.

use std::collections::BTreeMap;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::attr::{AttrTuple, AttrValue, Bin};
use crate::error::{Error, Result};
use crate::fdg::Fdg;
use crate::graph::AttributedGraph;
use crate::pdf::Pdf;

/// Largest attribute value drawn by the generator.
pub const ATTR_MAX: u32 = 999;

/// Random-graph generator parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorConfig {
    /// Number of models (classes).
    pub n_fdg: usize,
    /// Test graphs in total, split evenly across models.
    pub nt: usize,
    /// Reference graphs per model.
    pub nr: usize,
    /// Vertices of each model graph.
    pub nv: usize,
    /// Arcs of each model graph.
    pub ne: usize,
    /// Vertices deleted per derived graph.
    pub nd: usize,
    /// Vertices given fresh attributes per derived graph.
    pub nl: usize,
    pub seed: u64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig { n_fdg: 2, nt: 10, nr: 3, nv: 6, ne: 12, nd: 1, nl: 1, seed: 0 }
    }
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.nv == 0 {
            return Err(Error::Config("nv must be at least 1".into()));
        }
        if self.ne > self.nv * (self.nv - 1) {
            return Err(Error::Config(format!("ne = {} exceeds nv(nv-1) = {}", self.ne, self.nv * (self.nv - 1))));
        }
        if self.nd + self.nl > self.nv {
            return Err(Error::Config(format!("nd + nl = {} exceeds nv = {}", self.nd + self.nl, self.nv)));
        }
        Ok(())
    }
}

fn uniform_attr(rng: &mut impl Rng) -> AttrTuple {
    AttrTuple::real(rng.random_range(0..=ATTR_MAX) as f64)
}

/// `n_fdg` model graphs of `nv` vertices and `ne` distinct arcs with
/// integer attributes drawn uniformly from `0..=999`.
pub fn generate_models(cfg: &GeneratorConfig) -> Result<Vec<AttributedGraph>> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let nv = cfg.nv;
    (0..cfg.n_fdg)
        .map(|_| {
            let vertices = (0..nv).map(|_| uniform_attr(&mut rng)).collect();
            let mut chosen = index::sample(&mut rng, nv * (nv - 1), cfg.ne).into_vec();
            chosen.sort_unstable();
            let arcs: Vec<_> = chosen
                .into_iter()
                .map(|s| {
                    let i = s / (nv - 1);
                    let r = s % (nv - 1);
                    let j = if r < i { r } else { r + 1 };
                    ((i, j), uniform_attr(&mut rng))
                })
                .collect();
            AttributedGraph::new(vertices, arcs)
        })
        .collect()
}

/// Noise applied to a model graph.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Perturbation {
    /// Null `nd` random vertices (with their arcs) and redraw the attributes
    /// of `nl` others.
    DeleteDistort { nd: usize, nl: usize },
    /// Zero-mean Gaussian noise of deviation `sigma` on every real attribute,
    /// then `spurious` random vertex insertions or deletions.
    Gaussian { sigma: f64, spurious: usize },
}

/// Applies `mode` with a generator seeded by `seed`. Vertex positions are
/// kept: deleted vertices become null and inserted ones are appended, so
/// the result is extended whenever it holds a null vertex.
pub fn perturb(model: &AttributedGraph, mode: Perturbation, seed: u64) -> Result<AttributedGraph> {
    perturb_with(model, mode, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn perturb_with(model: &AttributedGraph, mode: Perturbation, rng: &mut impl Rng) -> Result<AttributedGraph> {
    let mut vertices: Vec<AttrTuple> = model.vertices().to_vec();
    let mut arcs: BTreeMap<(usize, usize), AttrTuple> =
        model.real_arcs().map(|(k, b)| (k, b.clone())).collect();
    let live = |v: &[AttrTuple]| (0..v.len()).filter(|&i| !v[i].is_null()).collect::<Vec<_>>();
    let delete = |vertices: &mut Vec<AttrTuple>, arcs: &mut BTreeMap<(usize, usize), AttrTuple>, i: usize| {
        vertices[i] = AttrTuple::null();
        arcs.retain(|(a, b), _| *a != i && *b != i);
    };
    match mode {
        Perturbation::DeleteDistort { nd, nl } => {
            let mut pool = live(&vertices);
            if nd + nl > pool.len() {
                return Err(Error::Config(format!("nd + nl = {} exceeds {} vertices", nd + nl, pool.len())));
            }
            pool.shuffle(rng);
            for &i in &pool[..nd] {
                delete(&mut vertices, &mut arcs, i);
            }
            for &i in &pool[nd..nd + nl] {
                vertices[i] = uniform_attr(rng);
            }
        }
        Perturbation::Gaussian { sigma, spurious } => {
            if !(sigma >= 0.0 && sigma.is_finite()) {
                return Err(Error::Config("sigma must be finite and non-negative".into()));
            }
            if sigma > 0.0 {
                let normal = Normal::new(0.0, sigma).map_err(|e| Error::Config(e.to_string()))?;
                let mut jitter = |t: &mut AttrTuple| {
                    for v in t.values_mut() {
                        if let AttrValue::Real(x) = v {
                            *x += normal.sample(rng);
                        }
                    }
                };
                for v in &mut vertices {
                    jitter(v);
                }
                for b in arcs.values_mut() {
                    jitter(b);
                }
            }
            for _ in 0..spurious {
                let pool = live(&vertices);
                if !pool.is_empty() && rng.random_bool(0.5) {
                    let i = pool[rng.random_range(0..pool.len())];
                    delete(&mut vertices, &mut arcs, i);
                } else {
                    let new = vertices.len();
                    vertices.push(uniform_attr(rng));
                    if !pool.is_empty() {
                        let j = pool[rng.random_range(0..pool.len())];
                        arcs.insert((new, j), uniform_attr(rng));
                    }
                }
            }
        }
    }
    let order = model.arc_order().map(|o| {
        (0..vertices.len())
            .map(|i| {
                let mut t: Vec<usize> =
                    o.get(i).map(|l| l.iter().copied().filter(|j| arcs.contains_key(&(i, *j))).collect()).unwrap_or_default();
                let extra: Vec<usize> = arcs.keys().filter(|(a, b)| *a == i && !t.contains(b)).map(|k| k.1).collect();
                t.extend(extra);
                t
            })
            .collect::<Vec<_>>()
    });
    let g = if vertices.iter().any(|v| v.is_null()) {
        AttributedGraph::new_extended(vertices, arcs)?
    } else {
        AttributedGraph::new(vertices, arcs)?
    };
    match order {
        Some(o) => g.with_arc_order(o),
        None => Ok(g),
    }
}

/// Spreads each real bin's mass as 1/2 on itself and 1/4 on each neighbour,
/// then renormalises. With `circular = Some((lo, hi))` neighbours wrap
/// inside `lo..=hi`. Categorical bins are left as they are.
pub fn smooth_pdf(p: &Pdf, circular: Option<(i64, i64)>) -> Pdf {
    let wrap = |b: i64| match circular {
        Some((lo, hi)) if hi >= lo => lo + (b - lo).rem_euclid(hi - lo + 1),
        _ => b,
    };
    let components = p
        .components()
        .iter()
        .map(|m| {
            let mut out: BTreeMap<Bin, f64> = BTreeMap::new();
            for (b, mass) in m {
                match *b {
                    Bin::Real(r) => {
                        for (d, w) in [(0, 0.5), (-1, 0.25), (1, 0.25)] {
                            *out.entry(Bin::Real(wrap(r + d))).or_insert(0.0) += mass * w;
                        }
                    }
                    Bin::Cat(_) => *out.entry(*b).or_insert(0.0) += mass,
                }
            }
            let total: f64 = out.values().sum();
            if total > 0.0 {
                for v in out.values_mut() {
                    *v /= total;
                }
            }
            out
        })
        .collect();
    Pdf::from_parts(p.null_prob(), components, p.support())
}

/// [`smooth_pdf`] applied to every vertex and arc pdf of `f`.
pub fn smooth_fdg(f: &mut Fdg, circular: Option<(i64, i64)>) {
    for p in f.vertex_pdfs.iter_mut().chain(f.arc_pdfs.iter_mut()) {
        *p = smooth_pdf(p, circular);
    }
}
