//! Typed access to flat `key = value` settings and the benchmark grid.

use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use crate::efficient::{RelaxParams, SubMethod};
use crate::error::{Error, Result};
use crate::synthesis::Binnings;
use crate::weights::{ConstraintMode, CostWeights};

use super::experiment::{ExperimentConfig, Method};
use super::generate::{GeneratorConfig, Perturbation};

/// Settings merged from a config file and command-line flags. Keys set
/// later override earlier ones.
#[derive(Clone, Debug, Default)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    pub fn new(values: BTreeMap<String, String>) -> Self {
        Settings { values }
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.values.insert(key.to_string(), value.to_string());
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| Error::Config(format!("bad value `{v}` for `{key}`"))),
        }
    }

    pub fn get_or<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        Ok(self.get(key)?.unwrap_or(default))
    }

    /// Comma-separated list; a single value is a list of one.
    pub fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>> {
        let Some(v) = self.raw(key) else { return Ok(None) };
        v.split(',')
            .map(|x| x.trim().parse().map_err(|_| Error::Config(format!("bad list entry `{x}` for `{key}`"))))
            .collect::<Result<Vec<T>>>()
            .map(Some)
    }

    pub fn flag(&self, key: &str) -> Result<bool> {
        match self.raw(key) {
            None => Ok(false),
            Some("true" | "1" | "yes" | "on") => Ok(true),
            Some("false" | "0" | "no" | "off") => Ok(false),
            Some(v) => Err(Error::Config(format!("bad boolean `{v}` for `{key}`"))),
        }
    }

    /// Fails on any key outside `known`.
    pub fn check_known(&self, known: &[&str]) -> Result<()> {
        let known: BTreeSet<&str> = known.iter().copied().collect();
        match self.values.keys().find(|k| !known.contains(k.as_str())) {
            Some(k) => Err(Error::Config(format!("unknown key `{k}`"))),
            None => Ok(()),
        }
    }
}

/// Keys read by [`weights`].
pub const WEIGHT_KEYS: [&str; 11] = ["k1", "k2", "k3", "k4", "k5", "k6", "k7", "k8", "kpr", "mode", "planar"];
/// Keys read by [`method`].
pub const METHOD_KEYS: [&str; 5] = ["method", "tau", "tp", "iters", "tolerance"];
/// Keys read by [`binnings`].
pub const BIN_KEYS: [&str; 2] = ["vertex_bin", "arc_bin"];
/// Keys read by [`bench_plan`] besides the weight, method and bin keys.
pub const BENCH_KEYS: [&str; 14] = [
    "n_fdg", "nt", "nr", "nv", "ne", "nd", "nl", "sigma", "spurious", "ref_sigma", "ref_spurious", "reps", "seed",
    "smooth",
];

/// `K1..K8`, `K_pr`, mode and planar flag. Unset weights keep their defaults.
pub fn weights(s: &Settings) -> Result<CostWeights> {
    let mut w = CostWeights::default();
    for i in 0..8 {
        if let Some(k) = s.get(&format!("k{}", i + 1))? {
            w.k[i] = k;
        }
    }
    w.k_pr = s.get_or("kpr", w.k_pr)?;
    w.mode = s.get_or("mode", ConstraintMode::Relaxed)?;
    w.planar = s.flag("planar")?;
    w.validate()?;
    Ok(w)
}

/// `bnb`, `noniter`, `relax-v` or `relax-ev` with their thresholds.
pub fn method(s: &Settings) -> Result<Method> {
    let params = RelaxParams {
        iters: s.get_or("iters", RelaxParams::default().iters)?,
        tolerance: s.get_or("tolerance", RelaxParams::default().tolerance)?,
    };
    let name = s.raw("method").unwrap_or("bnb");
    let m = match name {
        "bnb" | "optimal" => Method::Optimal,
        "noniter" => Method::Suboptimal(SubMethod::NonIterative { tau: s.get_or("tau", 1.0)? }),
        "relax-v" => Method::Suboptimal(SubMethod::RelaxVertex { tp: s.get_or("tp", 0.0)?, params }),
        "relax-ev" => Method::Suboptimal(SubMethod::RelaxExpanded { tp: s.get_or("tp", 0.0)?, params }),
        other => return Err(Error::Config(format!("unknown method `{other}`"))),
    };
    if let Some(t) = m.threshold() {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::Config(format!("threshold {t} outside [0, 1]")));
        }
    }
    Ok(m)
}

pub fn binnings(s: &Settings) -> Result<Binnings> {
    let d = Binnings::default();
    let (v, a): (f64, f64) = (s.get_or("vertex_bin", d.vertex.width)?, s.get_or("arc_bin", d.arc.width)?);
    if !(v > 0.0 && a > 0.0 && v.is_finite() && a.is_finite()) {
        return Err(Error::Config("bin widths must be positive".into()));
    }
    Ok(Binnings::new(v, a))
}

/// One experiment per `(nr, sigma)` point, `nr` varying slowest.
pub fn bench_plan(s: &Settings) -> Result<Vec<ExperimentConfig>> {
    let known: Vec<&str> =
        BENCH_KEYS.iter().chain(&WEIGHT_KEYS).chain(&METHOD_KEYS).chain(&BIN_KEYS).copied().collect();
    s.check_known(&known)?;
    let d = GeneratorConfig::default();
    let base = GeneratorConfig {
        n_fdg: s.get_or("n_fdg", d.n_fdg)?,
        nt: s.get_or("nt", d.nt)?,
        nr: d.nr,
        nv: s.get_or("nv", d.nv)?,
        ne: s.get_or("ne", d.ne)?,
        nd: s.get_or("nd", d.nd)?,
        nl: s.get_or("nl", d.nl)?,
        seed: s.get_or("seed", d.seed)?,
    };
    let nrs: Vec<usize> = s.list("nr")?.unwrap_or(vec![d.nr]);
    let sigmas: Vec<f64> = s.list("sigma")?.unwrap_or(vec![0.0]);
    let spurious: usize = s.get_or("spurious", 0)?;
    let ref_sigma: f64 = s.get_or("ref_sigma", 0.0)?;
    let ref_spurious: usize = s.get_or("ref_spurious", 0)?;
    let w = weights(s)?;
    let m = method(s)?;
    let b = binnings(s)?;
    let reps: usize = s.get_or("reps", 1)?;
    let smooth = s.flag("smooth")?;
    let noise = |sigma: f64, spurious: usize| {
        let mut v = Vec::new();
        if base.nd + base.nl > 0 {
            v.push(Perturbation::DeleteDistort { nd: base.nd, nl: base.nl });
        }
        if sigma > 0.0 || spurious > 0 {
            v.push(Perturbation::Gaussian { sigma, spurious });
        }
        v
    };
    let mut plan = Vec::new();
    for &nr in &nrs {
        for &sigma in &sigmas {
            let generator = GeneratorConfig { nr, ..base.clone() };
            generator.validate()?;
            plan.push(ExperimentConfig {
                generator,
                reference_noise: noise(ref_sigma, ref_spurious),
                test_noise: noise(sigma, spurious),
                weights: w.clone(),
                method: m,
                repetitions: reps,
                binnings: b,
                smoothing: smooth,
            });
        }
    }
    Ok(plan)
}
