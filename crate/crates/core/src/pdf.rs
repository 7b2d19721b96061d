//! Discrete probability functions over binned attribute tuples.
//!
//! A [`Pdf`] stores the probability of the null value plus, for each tuple
//! component, a distribution over bins conditional on the tuple being
//! non-null. Components are independent, so the probability of a tuple is
//! `(1 - p(null)) * prod_c p_c(bin_c)`.

use std::collections::BTreeMap;

use crate::attr::{AttrTuple, Bin, Binning};

/// Discrete probability function with a distinguished null bin.
#[derive(Clone, Debug, PartialEq)]
pub struct Pdf {
    null: f64,
    components: Vec<BTreeMap<Bin, f64>>,
    support: f64,
}

impl Pdf {
    /// All mass on the null bin.
    pub fn null_only(support: f64) -> Self {
        Pdf { null: 1.0, components: Vec::new(), support }
    }

    /// All mass on the bins of `a` (the null bin when `a` is null).
    pub fn point(a: &AttrTuple, binning: &Binning) -> Self {
        Pdf::from_samples(std::iter::once(a), binning)
    }

    /// Relative frequencies of a sample. The support is the sample size.
    pub fn from_samples<'a>(samples: impl IntoIterator<Item = &'a AttrTuple>, binning: &Binning) -> Self {
        let mut total = 0usize;
        let mut nulls = 0usize;
        let mut counts: Vec<BTreeMap<Bin, usize>> = Vec::new();
        for a in samples {
            total += 1;
            if a.is_null() {
                nulls += 1;
                continue;
            }
            if counts.is_empty() {
                counts = vec![BTreeMap::new(); a.arity()];
            }
            for (c, v) in a.values().iter().enumerate() {
                if c < counts.len() {
                    *counts[c].entry(binning.bin(v)).or_insert(0) += 1;
                }
            }
        }
        if total == 0 || nulls == total {
            return Pdf::null_only(total as f64);
        }
        let present = (total - nulls) as f64;
        let components = counts
            .into_iter()
            .map(|m| m.into_iter().map(|(b, k)| (b, k as f64 / present)).collect())
            .collect();
        Pdf { null: nulls as f64 / total as f64, components, support: total as f64 }
    }

    /// Builds a pdf from raw parts; component maps are conditional on non-null.
    pub fn from_parts(null: f64, components: Vec<BTreeMap<Bin, f64>>, support: f64) -> Self {
        if null >= 1.0 || components.is_empty() {
            return Pdf { null: 1.0, components: Vec::new(), support };
        }
        Pdf { null, components, support }
    }

    pub fn null_prob(&self) -> f64 {
        self.null
    }

    pub fn support(&self) -> f64 {
        self.support
    }

    pub fn components(&self) -> &[BTreeMap<Bin, f64>] {
        &self.components
    }

    pub fn arity(&self) -> usize {
        self.components.len()
    }

    /// Probability of the tuple `a` (of the null bin when `a` is null).
    pub fn prob(&self, a: &AttrTuple, binning: &Binning) -> f64 {
        if a.is_null() {
            return self.null;
        }
        if a.arity() != self.components.len() {
            return 0.0;
        }
        let mut p = 1.0 - self.null;
        for (c, v) in a.values().iter().enumerate() {
            p *= self.components[c].get(&binning.bin(v)).copied().unwrap_or(0.0);
        }
        p
    }

    /// Probability of a joint bin (`None` is the null bin).
    pub fn prob_bins(&self, bins: Option<&[Bin]>) -> f64 {
        match bins {
            None => self.null,
            Some(b) => {
                if b.len() != self.components.len() {
                    return 0.0;
                }
                let mut p = 1.0 - self.null;
                for (c, k) in b.iter().enumerate() {
                    p *= self.components[c].get(k).copied().unwrap_or(0.0);
                }
                p
            }
        }
    }

    /// Every joint bin with non-zero probability, null first.
    pub fn entries(&self) -> Vec<(Option<Vec<Bin>>, f64)> {
        let mut out = Vec::new();
        if self.null > 0.0 {
            out.push((None, self.null));
        }
        if self.null < 1.0 && !self.components.is_empty() {
            let mut acc: Vec<(Vec<Bin>, f64)> = vec![(Vec::new(), 1.0 - self.null)];
            for comp in &self.components {
                let mut next = Vec::with_capacity(acc.len() * comp.len());
                for (prefix, p) in &acc {
                    for (b, q) in comp {
                        if *q > 0.0 {
                            let mut v = prefix.clone();
                            v.push(*b);
                            next.push((v, p * q));
                        }
                    }
                }
                acc = next;
            }
            out.extend(acc.into_iter().filter(|(_, p)| *p > 0.0).map(|(b, p)| (Some(b), p)));
        }
        out
    }

    /// Total probability mass (1 for a valid pdf).
    pub fn total(&self) -> f64 {
        let mut s = self.null;
        if self.null < 1.0 {
            let mut prod = 1.0 - self.null;
            for comp in &self.components {
                prod *= comp.values().sum::<f64>();
            }
            s += prod;
        }
        s
    }

    /// Shannon entropy in bits over the joint bins, `0 log 0 = 0`.
    pub fn entropy_bits(&self) -> f64 {
        self.entries()
            .iter()
            .map(|(_, p)| if *p > 0.0 { -p * p.log2() } else { 0.0 })
            .sum()
    }

    /// Convex mixture of pdfs. Weights need not be normalised; a zero total
    /// yields the null-only pdf. The support is the sum of supports.
    pub fn mix(parts: &[(f64, &Pdf)]) -> Pdf {
        let support: f64 = parts.iter().map(|(_, p)| p.support).sum();
        let wsum: f64 = parts.iter().map(|(w, _)| *w).sum();
        if wsum <= 0.0 {
            return Pdf::null_only(support);
        }
        let null: f64 = parts.iter().map(|(w, p)| w * p.null).sum::<f64>() / wsum;
        let arity = parts.iter().filter(|(_, p)| p.null < 1.0).map(|(_, p)| p.arity()).max().unwrap_or(0);
        let present: f64 = parts.iter().filter(|(_, p)| p.null < 1.0).map(|(w, p)| w * (1.0 - p.null)).sum();
        if present <= 0.0 || arity == 0 {
            return Pdf::null_only(support);
        }
        let mut components = vec![BTreeMap::new(); arity];
        for (w, p) in parts {
            if p.null >= 1.0 || *w == 0.0 {
                continue;
            }
            let scale = w * (1.0 - p.null) / present;
            for (c, comp) in p.components.iter().enumerate() {
                for (b, q) in comp {
                    *components[c].entry(*b).or_insert(0.0) += scale * q;
                }
            }
        }
        Pdf { null: null.min(1.0), components, support }
    }
}

/// Normalised negative log-probability cost, capped at 1 below `k_pr`.
#[inline]
pub fn prob_cost(p: f64, k_pr: f64) -> f64 {
    if p >= k_pr {
        let c = -p.ln() / -k_pr.ln();
        if c <= 0.0 {
            0.0
        } else {
            c.min(1.0)
        }
    } else {
        1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attr::AttrValue;

    #[test]
    fn frequencies_and_null() {
        let s = [AttrTuple::cat(1), AttrTuple::cat(1), AttrTuple::null(), AttrTuple::cat(2)];
        let p = Pdf::from_samples(s.iter(), &Binning::default());
        assert_eq!(p.null_prob(), 0.25);
        assert!((p.prob(&AttrTuple::cat(1), &Binning::default()) - 0.5).abs() < 1e-15);
        assert!((p.total() - 1.0).abs() < 1e-12);
        assert_eq!(p.support(), 4.0);
    }

    #[test]
    fn independent_components() {
        let b = Binning::default();
        let t = |x, y| AttrTuple::new(vec![AttrValue::Cat(x), AttrValue::Cat(y)]).unwrap();
        let s = [t(0, 0), t(1, 1)];
        let p = Pdf::from_samples(s.iter(), &b);
        assert!((p.prob(&t(0, 1), &b) - 0.25).abs() < 1e-15);
        assert_eq!(p.entries().len(), 4);
        assert!((p.entropy_bits() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn mixture_weights() {
        let b = Binning::default();
        let d = Pdf::point(&AttrTuple::cat(3), &b);
        let half = Pdf::from_samples([AttrTuple::cat(3), AttrTuple::null()].iter(), &b);
        let m = Pdf::mix(&[(1.0, &d), (2.0, &half)]);
        assert!((m.prob(&AttrTuple::cat(3), &b) - 2.0 / 3.0).abs() < 1e-12);
        assert!((m.null_prob() - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(m.support(), 3.0);
    }

    #[test]
    fn cost_scale() {
        assert_eq!(prob_cost(1.0, 1e-4), 0.0);
        assert!((prob_cost(0.1, 0.01) - 0.5).abs() < 1e-12);
        assert_eq!(prob_cost(0.0, 1e-4), 1.0);
    }
}
