//! Matching cost weights and matcher options.

use crate::error::{Error, Result};

/// How second-order relations enter the distance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ConstraintMode {
    /// Relations are hard constraints; the cost is first-order only.
    Restricted,
    /// Relations are penalised through `K3..K8`.
    Relaxed,
}

impl std::str::FromStr for ConstraintMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "restricted" => Ok(ConstraintMode::Restricted),
            "relaxed" => Ok(ConstraintMode::Relaxed),
            other => Err(Error::Config(format!("unknown constraint mode `{other}`"))),
        }
    }
}

impl std::fmt::Display for ConstraintMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ConstraintMode::Restricted => "restricted",
            ConstraintMode::Relaxed => "relaxed",
        })
    }
}

/// Weights `K1..K8` (stored 0-based in `k`), the probability floor `k_pr`,
/// the planar flag and the constraint mode.
///
/// `K1`/`K2` weight vertex/arc first-order costs, `K3`/`K4` vertex/arc
/// antagonism, `K5`/`K6` vertex/arc occurrence and `K7`/`K8` vertex/arc
/// existence.
#[derive(Clone, Debug, PartialEq)]
pub struct CostWeights {
    pub k: [f64; 8],
    pub k_pr: f64,
    pub planar: bool,
    pub mode: ConstraintMode,
}

impl Default for CostWeights {
    fn default() -> Self {
        CostWeights {
            k: [1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            k_pr: 1e-4,
            planar: false,
            mode: ConstraintMode::Relaxed,
        }
    }
}

impl CostWeights {
    pub fn restricted() -> Self {
        CostWeights { k: [1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0], mode: ConstraintMode::Restricted, ..Default::default() }
    }

    pub fn relaxed(k: [f64; 8]) -> Self {
        CostWeights { k, ..Default::default() }
    }

    pub fn with_mode(mut self, mode: ConstraintMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_planar(mut self, planar: bool) -> Self {
        self.planar = planar;
        self
    }

    pub fn with_k_pr(mut self, k_pr: f64) -> Self {
        self.k_pr = k_pr;
        self
    }

    /// `K_i` with 1-based `i`.
    #[inline]
    pub fn ki(&self, i: usize) -> f64 {
        self.k[i - 1]
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k_pr > 0.0 && self.k_pr < 1.0) {
            return Err(Error::Config(format!("K_pr must lie strictly between 0 and 1, got {}", self.k_pr)));
        }
        if let Some((i, w)) = self.k.iter().enumerate().find(|(_, w)| !(**w >= 0.0 && w.is_finite())) {
            return Err(Error::Config(format!("K{} must be finite and non-negative, got {w}", i + 1)));
        }
        Ok(())
    }

    /// Same weights with every `K` multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        let mut w = self.clone();
        for k in &mut w.k {
            *k *= c;
        }
        w
    }
}
