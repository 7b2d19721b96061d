use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use fdg::baseline::{knn_classify, EditCosts};
use fdg::clustering::{hierarchical_clustering, incremental_clustering, AgDistance, IncrementalConfig, Linkage};
use fdg::harness::config::{self, Settings};
use fdg::harness::{fdg_classify, io, run_experiment, Method};
use fdg::synthesis::synth_from_labelled_ags_with;
use fdg::{AttributedGraph, Labelling};

#[derive(Parser)]
#[command(name = "fdg", version, about = "Function-described graphs: synthesis, matching, clustering")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build an FDG from attributed graphs and a common labelling.
    Synth(SynthArgs),
    /// Distance between an attributed graph and an FDG.
    Dist(DistArgs),
    /// Cluster attributed graphs into FDGs.
    Cluster(ClusterArgs),
    /// Classify an attributed graph against references or models.
    Classify(ClassifyArgs),
    /// Run the random-graph benchmark and write a CSV.
    Bench(BenchArgs),
}

/// Options shared by every subcommand. Flags override the config file.
#[derive(Args, Clone, Default)]
struct Common {
    /// `key = value` file read before the flags.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Extra `key=value` settings.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Args, Clone, Default)]
struct MatchFlags {
    #[arg(long, value_parser = ["restricted", "relaxed"])]
    mode: Option<String>,
    #[arg(long)]
    k1: Option<f64>,
    #[arg(long)]
    k2: Option<f64>,
    #[arg(long)]
    k3: Option<f64>,
    #[arg(long)]
    k4: Option<f64>,
    #[arg(long)]
    k5: Option<f64>,
    #[arg(long)]
    k6: Option<f64>,
    #[arg(long)]
    k7: Option<f64>,
    #[arg(long)]
    k8: Option<f64>,
    #[arg(long)]
    kpr: Option<f64>,
    /// Require the relative arc order to be preserved.
    #[arg(long)]
    planar: bool,
    /// bnb, noniter, relax-v or relax-ev.
    #[arg(long)]
    method: Option<String>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    tp: Option<f64>,
    #[arg(long)]
    iters: Option<usize>,
    #[arg(long)]
    vertex_bin: Option<f64>,
    #[arg(long)]
    arc_bin: Option<f64>,
}

impl MatchFlags {
    fn apply(&self, s: &mut Settings) {
        if let Some(m) = &self.mode {
            s.set("mode", m);
        }
        let ks = [self.k1, self.k2, self.k3, self.k4, self.k5, self.k6, self.k7, self.k8];
        for (i, k) in ks.iter().enumerate() {
            if let Some(k) = k {
                s.set(&format!("k{}", i + 1), k);
            }
        }
        let opt = [("kpr", self.kpr), ("tau", self.tau), ("tp", self.tp), ("vertex_bin", self.vertex_bin), ("arc_bin", self.arc_bin)];
        for (key, v) in opt {
            if let Some(v) = v {
                s.set(key, v);
            }
        }
        if let Some(m) = &self.method {
            s.set("method", m);
        }
        if let Some(i) = self.iters {
            s.set("iters", i);
        }
        if self.planar {
            s.set("planar", true);
        }
    }
}

#[derive(Args)]
struct SynthArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long = "ag", required = true, num_args = 1..)]
    ags: Vec<PathBuf>,
    /// Common labelling, one line per graph.
    #[arg(long)]
    labels: PathBuf,
    /// FDG order; defaults to the largest label plus one.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    vertex_bin: Option<f64>,
    #[arg(long)]
    arc_bin: Option<f64>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct DistArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    flags: MatchFlags,
    #[arg(long)]
    ag: PathBuf,
    #[arg(long)]
    fdg: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClusterMethod {
    Incremental,
    Complete,
    Single,
}

#[derive(Args)]
struct ClusterArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    flags: MatchFlags,
    #[arg(long = "ag", required = true, num_args = 1..)]
    ags: Vec<PathBuf>,
    #[arg(long = "cluster-method", value_enum, default_value = "incremental")]
    cluster_method: ClusterMethod,
    /// Merge threshold.
    #[arg(long)]
    dalpha: f64,
    /// Edit cost preset for hierarchical clustering: unit, squared or banded.
    #[arg(long, default_value = "unit")]
    costs: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassifyMethod {
    Knn,
    Fdg,
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    common: Common,
    #[command(flatten)]
    flags: MatchFlags,
    #[arg(long = "classifier", value_enum, default_value = "fdg")]
    classifier: ClassifyMethod,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value = "unit")]
    costs: String,
    #[arg(long)]
    test: PathBuf,
    /// Reference graph with its class, `FILE:CLASS` (k-NN).
    #[arg(long = "ref", value_name = "FILE:CLASS")]
    refs: Vec<String>,
    /// Model FDGs, one per class in order.
    #[arg(long = "models", num_args = 1..)]
    models: Vec<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    out: PathBuf,
}

fn settings(c: &Common) -> Result<Settings> {
    let mut s = match &c.config {
        Some(p) => Settings::new(io::read_config(p).with_context(|| format!("reading {}", p.display()))?),
        None => Settings::default(),
    };
    for kv in &c.set {
        let Some((k, v)) = kv.split_once('=') else { bail!("expected KEY=VALUE, got `{kv}`") };
        s.set(k.trim(), v.trim());
    }
    Ok(s)
}

fn read_ags(paths: &[PathBuf]) -> Result<Vec<AttributedGraph>> {
    paths.iter().map(|p| io::read_ag(p).with_context(|| format!("reading {}", p.display()))).collect()
}

fn format_map(l: &Labelling) -> String {
    l.vertex_map
        .iter()
        .enumerate()
        .map(|(i, a)| match a {
            Some(a) => format!("{i}->{a}"),
            None => format!("{i}->#"),
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn synth(a: SynthArgs) -> Result<()> {
    let mut s = settings(&a.common)?;
    if let Some(v) = a.vertex_bin {
        s.set("vertex_bin", v);
    }
    if let Some(v) = a.arc_bin {
        s.set("arc_bin", v);
    }
    let b = config::binnings(&s)?;
    let d = read_ags(&a.ags)?;
    let orders: Vec<usize> = d.iter().map(AttributedGraph::order).collect();
    let labels = io::read_labelling(&a.labels, &orders)?;
    let f = synth_from_labelled_ags_with(&d, &labels, a.n, &b)?;
    io::write_fdg(&a.out, &f)?;
    println!("order = {}", f.order());
    println!("out = {}", a.out.display());
    Ok(())
}

fn dist(a: DistArgs) -> Result<()> {
    let mut s = settings(&a.common)?;
    a.flags.apply(&mut s);
    let w = config::weights(&s)?;
    let m = config::method(&s)?;
    let g = io::read_ag(&a.ag)?;
    let f = io::read_fdg(&a.fdg)?;
    let r = m.distance(&g, &f, &w)?;
    println!("method = {m}");
    println!("distance = {}", r.distance);
    println!("valid = {}", r.valid);
    println!("labelling = {}", format_map(&r.labelling));
    println!("explored_nodes = {}", r.explored_nodes);
    Ok(())
}

fn cluster(a: ClusterArgs) -> Result<()> {
    let mut s = settings(&a.common)?;
    a.flags.apply(&mut s);
    let b = config::binnings(&s)?;
    let d = read_ags(&a.ags)?;
    let c = match a.cluster_method {
        ClusterMethod::Incremental => {
            let method = match config::method(&s)? {
                Method::Optimal => None,
                Method::Suboptimal(m) => Some(m),
            };
            let cfg = IncrementalConfig { weights: config::weights(&s)?, method, binnings: b };
            incremental_clustering(&d, &cfg, a.dalpha)?
        }
        ClusterMethod::Complete | ClusterMethod::Single => {
            let linkage = if matches!(a.cluster_method, ClusterMethod::Single) { Linkage::Single } else { Linkage::Complete };
            let costs: EditCosts = a.costs.parse()?;
            hierarchical_clustering(&d, &AgDistance::Edit(costs), a.dalpha, linkage, &b)?
        }
    };
    fs::create_dir_all(&a.out)?;
    let mut manifest = String::new();
    for (k, (f, members)) in c.fdgs.iter().zip(&c.provenance).enumerate() {
        io::write_fdg(a.out.join(format!("cluster_{k}.fdg")), f)?;
        let names: Vec<String> = members.iter().map(|&i| a.ags[i].display().to_string()).collect();
        manifest.push_str(&format!("cluster_{k} = {}\n", names.join(",")));
    }
    fs::write(a.out.join("manifest.txt"), &manifest)?;
    println!("clusters = {}", c.fdgs.len());
    print!("{manifest}");
    Ok(())
}

fn parse_ref(r: &str) -> Result<(PathBuf, usize)> {
    let Some((p, c)) = r.rsplit_once(':') else { bail!("expected FILE:CLASS, got `{r}`") };
    Ok((Path::new(p).to_path_buf(), c.parse().with_context(|| format!("bad class in `{r}`"))?))
}

fn classify(a: ClassifyArgs) -> Result<()> {
    let mut s = settings(&a.common)?;
    a.flags.apply(&mut s);
    let test = io::read_ag(&a.test)?;
    match a.classifier {
        ClassifyMethod::Knn => {
            let costs: EditCosts = a.costs.parse()?;
            let refs = a
                .refs
                .iter()
                .map(|r| {
                    let (p, c) = parse_ref(r)?;
                    Ok((io::read_ag(&p).with_context(|| format!("reading {}", p.display()))?, c))
                })
                .collect::<Result<Vec<_>>>()?;
            let class = knn_classify(&test, &refs, a.k, &costs)?;
            println!("class = {class}");
        }
        ClassifyMethod::Fdg => {
            if a.models.is_empty() {
                bail!("--models is required with the fdg classifier");
            }
            let models = a.models.iter().map(io::read_fdg).collect::<fdg::Result<Vec<_>>>()?;
            let r = fdg_classify(&test, &models, &config::weights(&s)?, config::method(&s)?)?;
            println!("class = {}", r.class);
            println!("distance = {}", r.distance);
            println!("explored_nodes = {}", r.explored);
        }
    }
    Ok(())
}

fn bench(a: BenchArgs) -> Result<()> {
    let mut s = settings(&a.common)?;
    if let Some(seed) = a.seed {
        s.set("seed", seed);
    }
    if let Some(r) = a.reps {
        s.set("reps", r);
    }
    let plan = config::bench_plan(&s)?;
    let mut rows = Vec::with_capacity(plan.len());
    for cfg in &plan {
        let r = run_experiment(cfg)?;
        println!("{}", r.summary());
        rows.push(r);
    }
    io::write_csv(&a.out, &rows)?;
    println!("out = {}", a.out.display());
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().cmd {
        Cmd::Synth(a) => synth(a),
        Cmd::Dist(a) => dist(a),
        Cmd::Cluster(a) => cluster(a),
        Cmd::Classify(a) => classify(a),
        Cmd::Bench(a) => bench(a),
    }
}
