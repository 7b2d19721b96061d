//! FDG classifier and the synthetic recognition experiment.

use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::efficient::{suboptimal_distance, SubMethod};
use crate::error::{Error, Result};
use crate::fdg::{Fdg, Role};
use crate::graph::AttributedGraph;
use crate::labelling::CommonLabelling;
use crate::matching::{bnb_distance, MatchResult};
use crate::synthesis::{synth_from_labelled_ags_with, Binnings};
use crate::weights::CostWeights;

use super::generate::{generate_models, perturb_with, smooth_fdg, GeneratorConfig, Perturbation};

/// Distance used by the classifier.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub enum Method {
    #[default]
    Optimal,
    Suboptimal(SubMethod),
}

impl Method {
    pub fn distance(&self, g: &AttributedGraph, f: &Fdg, w: &CostWeights) -> Result<MatchResult> {
        match self {
            Method::Optimal => bnb_distance(g, f, w),
            Method::Suboptimal(m) => suboptimal_distance(g, f, w, *m),
        }
    }

    /// `τ` or `T_p` of a sub-optimal method.
    pub fn threshold(&self) -> Option<f64> {
        match self {
            Method::Optimal => None,
            Method::Suboptimal(SubMethod::NonIterative { tau }) => Some(*tau),
            Method::Suboptimal(SubMethod::RelaxVertex { tp, .. } | SubMethod::RelaxExpanded { tp, .. }) => Some(*tp),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Optimal => "bnb",
            Method::Suboptimal(SubMethod::NonIterative { .. }) => "noniter",
            Method::Suboptimal(SubMethod::RelaxVertex { .. }) => "relax-v",
            Method::Suboptimal(SubMethod::RelaxExpanded { .. }) => "relax-ev",
        })
    }
}

/// Outcome of classifying one graph.
#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    /// Index of the closest model.
    pub class: usize,
    pub distance: f64,
    /// Search nodes summed over all models.
    pub explored: u64,
}

/// Closest model by the selected distance; ties go to the lowest index.
pub fn fdg_classify(test: &AttributedGraph, models: &[Fdg], w: &CostWeights, method: Method) -> Result<Classification> {
    if models.is_empty() {
        return Err(Error::InvalidInput("no models to classify against".into()));
    }
    let results: Vec<MatchResult> =
        models.par_iter().map(|f| method.distance(test, f, w)).collect::<Result<_>>()?;
    let mut class = 0;
    for (k, r) in results.iter().enumerate() {
        if r.distance < results[class].distance {
            class = k;
        }
    }
    Ok(Classification {
        class,
        distance: results[class].distance,
        explored: results.iter().map(|r| r.explored_nodes).sum(),
    })
}

/// Vertex and relation counts of an FDG.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct StructureCounts {
    /// Vertices that are not certainly null.
    pub vertices: f64,
    /// Unordered pairs of such vertices marked antagonistic.
    pub antagonisms: f64,
    /// Ordered pairs of such vertices marked occurrent.
    pub occurrences: f64,
    /// Unordered pairs of distinct vertices marked existent.
    pub existences: f64,
}

pub fn structure_counts(f: &Fdg) -> StructureCounts {
    let n = f.order();
    let real: Vec<bool> = (0..n).map(|i| f.vertex_pdf(i).null_prob() < 1.0).collect();
    let r = f.relations(Role::Vertex);
    let mut c = StructureCounts { vertices: real.iter().filter(|x| **x).count() as f64, ..Default::default() };
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            if real[i] && real[j] {
                if i < j && r.antagonism.get(i, j) {
                    c.antagonisms += 1.0;
                }
                if r.occurrence.get(i, j) {
                    c.occurrences += 1.0;
                }
            }
            if i < j && r.existence.get(i, j) {
                c.existences += 1.0;
            }
        }
    }
    c
}

/// FDG of order at least `nv` synthesised from perturbed copies of one model.
/// Surviving vertices keep their model index as label; inserted vertices
/// take fresh labels after `nv`.
pub fn reference_fdg(nv: usize, refs: &[AttributedGraph], binnings: &Binnings) -> Result<Fdg> {
    let mut graphs = Vec::with_capacity(refs.len());
    let mut maps = Vec::with_capacity(refs.len());
    let mut next = nv;
    for r in refs {
        let (g, origin) = r.compact();
        maps.push(
            origin
                .into_iter()
                .map(|o| {
                    if o < nv {
                        Some(o)
                    } else {
                        next += 1;
                        Some(next - 1)
                    }
                })
                .collect(),
        );
        graphs.push(g);
    }
    synth_from_labelled_ags_with(&graphs, &CommonLabelling::new(maps), Some(next), binnings)
}

/// Everything needed to run one recognition experiment.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub generator: GeneratorConfig,
    /// Applied in order to each reference graph.
    pub reference_noise: Vec<Perturbation>,
    /// Applied in order to each test graph.
    pub test_noise: Vec<Perturbation>,
    pub weights: CostWeights,
    pub method: Method,
    pub repetitions: usize,
    pub binnings: Binnings,
    /// Smooth every vertex and arc pdf of the synthesised models.
    pub smoothing: bool,
}

impl ExperimentConfig {
    /// Delete/distort noise from the generator on both sets.
    pub fn from_generator(generator: GeneratorConfig) -> Self {
        let dd = Perturbation::DeleteDistort { nd: generator.nd, nl: generator.nl };
        ExperimentConfig {
            generator,
            reference_noise: vec![dd],
            test_noise: vec![dd],
            weights: CostWeights::default(),
            method: Method::Optimal,
            repetitions: 1,
            binnings: Binnings::default(),
            smoothing: false,
        }
    }

    /// Gaussian deviation of the test noise (0 when absent).
    pub fn sigma(&self) -> f64 {
        self.test_noise
            .iter()
            .map(|p| match p {
                Perturbation::Gaussian { sigma, .. } => *sigma,
                _ => 0.0,
            })
            .fold(0.0, f64::max)
    }

    /// Spurious insertions or deletions in the test noise.
    pub fn structural_noise(&self) -> usize {
        self.test_noise
            .iter()
            .map(|p| match p {
                Perturbation::Gaussian { spurious, .. } => *spurious,
                _ => 0,
            })
            .sum()
    }
}

/// Aggregated result of an experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentReport {
    pub method: String,
    pub nr: usize,
    pub sigma: f64,
    pub structural_noise: usize,
    pub k: [f64; 8],
    pub threshold: Option<f64>,
    /// Fraction of test graphs assigned to their own model.
    pub correctness: f64,
    /// `confusion[true][predicted]`, summed over repetitions.
    pub confusion: Vec<Vec<u64>>,
    /// Mean search nodes per graph-to-model comparison.
    pub mean_nodes: f64,
    /// Mean wall time per comparison in milliseconds.
    pub mean_ms: f64,
    /// Mean structure of the synthesised models.
    pub structure: StructureCounts,
}

impl ExperimentReport {
    pub const CSV_HEADER: [&'static str; 16] = [
        "method",
        "NR",
        "sigma",
        "structural_noise",
        "K1",
        "K2",
        "K3",
        "K4",
        "K5",
        "K6",
        "K7",
        "K8",
        "tau_or_tp",
        "correctness",
        "mean_nodes",
        "mean_ms",
    ];

    pub fn csv_row(&self) -> Vec<String> {
        let mut row = vec![
            self.method.clone(),
            self.nr.to_string(),
            self.sigma.to_string(),
            self.structural_noise.to_string(),
        ];
        row.extend(self.k.iter().map(|k| k.to_string()));
        row.push(self.threshold.map_or_else(String::new, |t| t.to_string()));
        row.push(format!("{:.6}", self.correctness));
        row.push(format!("{:.3}", self.mean_nodes));
        row.push(format!("{:.4}", self.mean_ms));
        row
    }

    /// Multi-line `key = value` summary.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("method = {}\n", self.method));
        s.push_str(&format!("NR = {}\nsigma = {}\nstructural_noise = {}\n", self.nr, self.sigma, self.structural_noise));
        s.push_str(&format!("K = {:?}\n", self.k));
        if let Some(t) = self.threshold {
            s.push_str(&format!("tau_or_tp = {t}\n"));
        }
        s.push_str(&format!("correctness = {:.4}\n", self.correctness));
        s.push_str(&format!("mean_nodes = {:.2}\nmean_ms = {:.4}\n", self.mean_nodes, self.mean_ms));
        s.push_str(&format!(
            "model_vertices = {:.2}\nmodel_antagonisms = {:.2}\n",
            self.structure.vertices, self.structure.antagonisms
        ));
        for (c, row) in self.confusion.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            s.push_str(&format!("confusion[{c}] = {}\n", cells.join(" ")));
        }
        s
    }
}

/// Models, references and tests of one repetition.
pub struct Instance {
    pub models: Vec<AttributedGraph>,
    pub fdgs: Vec<Fdg>,
    /// `(test graph, true class)`, compacted.
    pub tests: Vec<(AttributedGraph, usize)>,
}

fn apply(model: &AttributedGraph, noise: &[Perturbation], rng: &mut ChaCha8Rng) -> Result<AttributedGraph> {
    let mut g = model.clone();
    for p in noise {
        g = perturb_with(&g, *p, rng)?;
    }
    Ok(g)
}

/// Builds the reference FDGs and the test set for one seed.
pub fn build_instance(cfg: &ExperimentConfig, seed: u64) -> Result<Instance> {
    let gen = GeneratorConfig { seed, ..cfg.generator.clone() };
    let models = generate_models(&gen)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0f_7e57);
    let per_class = gen.nt / gen.n_fdg.max(1);
    let mut fdgs = Vec::with_capacity(models.len());
    let mut tests = Vec::new();
    for (c, m) in models.iter().enumerate() {
        let refs: Vec<AttributedGraph> =
            (0..gen.nr).map(|_| apply(m, &cfg.reference_noise, &mut rng)).collect::<Result<_>>()?;
        let mut f = reference_fdg(gen.nv, &refs, &cfg.binnings)?;
        if cfg.smoothing {
            smooth_fdg(&mut f, None);
        }
        fdgs.push(f);
        for _ in 0..per_class {
            let t = apply(m, &cfg.test_noise, &mut rng)?;
            tests.push((t.compact().0, c));
        }
    }
    Ok(Instance { models, fdgs, tests })
}

/// Runs `repetitions` independent instances and averages the results.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    let gen = &cfg.generator;
    gen.validate()?;
    cfg.weights.validate()?;
    if gen.n_fdg == 0 || gen.nt < gen.n_fdg || gen.nr == 0 {
        return Err(Error::Config("need n_fdg >= 1, nr >= 1 and nt >= n_fdg".into()));
    }
    if cfg.repetitions == 0 {
        return Err(Error::Config("repetitions must be at least 1".into()));
    }
    let mut seeds = ChaCha8Rng::seed_from_u64(gen.seed);
    let mut confusion = vec![vec![0u64; gen.n_fdg]; gen.n_fdg];
    let (mut correct, mut total, mut nodes, mut comparisons) = (0u64, 0u64, 0u64, 0u64);
    let mut ms = 0.0;
    let mut structure = StructureCounts::default();
    for _ in 0..cfg.repetitions {
        let inst = build_instance(cfg, seeds.random())?;
        for f in &inst.fdgs {
            let s = structure_counts(f);
            structure.vertices += s.vertices;
            structure.antagonisms += s.antagonisms;
            structure.occurrences += s.occurrences;
            structure.existences += s.existences;
        }
        let outcomes: Vec<(Classification, f64)> = inst
            .tests
            .par_iter()
            .map(|(t, _)| {
                let start = Instant::now();
                let c = fdg_classify(t, &inst.fdgs, &cfg.weights, cfg.method)?;
                Ok((c, start.elapsed().as_secs_f64() * 1e3))
            })
            .collect::<Result<_>>()?;
        for ((_, truth), (c, t)) in inst.tests.iter().zip(outcomes) {
            confusion[*truth][c.class] += 1;
            correct += (c.class == *truth) as u64;
            total += 1;
            nodes += c.explored;
            comparisons += inst.fdgs.len() as u64;
            ms += t;
        }
    }
    let models = (cfg.repetitions * gen.n_fdg) as f64;
    structure.vertices /= models;
    structure.antagonisms /= models;
    structure.occurrences /= models;
    structure.existences /= models;
    Ok(ExperimentReport {
        method: cfg.method.to_string(),
        nr: gen.nr,
        sigma: cfg.sigma(),
        structural_noise: cfg.structural_noise(),
        k: cfg.weights.k,
        threshold: cfg.method.threshold(),
        correctness: correct as f64 / total as f64,
        confusion,
        mean_nodes: nodes as f64 / comparisons as f64,
        mean_ms: ms / comparisons as f64,
        structure,
    })
}
