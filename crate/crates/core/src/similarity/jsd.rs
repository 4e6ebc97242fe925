use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};

/// Relative frequencies of the 1- to 3-grams of a corpus, counts pooled
/// over the three orders. Tokens are lowercased; n-grams do not cross
/// sentence boundaries.
#[derive(Debug, Clone, PartialEq)]
pub struct TermDistribution {
    pub probs: BTreeMap<String, f64>,
    /// Added to every probability over the union support before comparing.
    pub epsilon: f64,
}

impl TermDistribution {
    pub fn build<S: AsRef<str>>(sentences: &[Vec<S>]) -> Result<TermDistribution> {
        let mut counts: BTreeMap<String, u64> = BTreeMap::new();
        for s in sentences {
            let tokens: Vec<String> = s.iter().map(|t| t.as_ref().to_lowercase()).collect();
            for n in 1..=3 {
                for gram in tokens.windows(n) {
                    *counts.entry(gram.join(" ")).or_insert(0) += 1;
                }
            }
        }
        TermDistribution::from_counts(counts)
    }

    pub fn from_counts(counts: BTreeMap<String, u64>) -> Result<TermDistribution> {
        let total: u64 = counts.values().sum();
        if total == 0 {
            return Err(Error::Similarity(
                "term distribution of an empty corpus".into(),
            ));
        }
        Ok(TermDistribution {
            probs: counts
                .into_iter()
                .map(|(k, c)| (k, c as f64 / total as f64))
                .collect(),
            epsilon: 0.0,
        })
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }
}

fn kl_to_mixture(p: &[f64], m: &[f64]) -> f64 {
    p.iter()
        .zip(m)
        .filter(|(pi, _)| **pi > 0.0)
        .map(|(pi, mi)| pi * (pi / mi).log2())
        .sum()
}

/// Jensen-Shannon divergence in bits, scaled by 100 (0 = identical,
/// 100 = disjoint support).
pub fn jsd(s: &TermDistribution, t: &TermDistribution) -> f64 {
    let support: BTreeSet<&String> = s.probs.keys().chain(t.probs.keys()).collect();
    let n = support.len() as f64;
    let smooth = |d: &TermDistribution, k: &String| {
        let p = d.probs.get(k).copied().unwrap_or(0.0);
        (p + d.epsilon) / (1.0 + d.epsilon * n)
    };
    let p: Vec<f64> = support.iter().map(|k| smooth(s, k)).collect();
    let q: Vec<f64> = support.iter().map(|k| smooth(t, k)).collect();
    let m: Vec<f64> = p.iter().zip(&q).map(|(a, b)| 0.5 * (a + b)).collect();
    let value = 0.5 * kl_to_mixture(&p, &m) + 0.5 * kl_to_mixture(&q, &m);
    (100.0 * value).clamp(0.0, 100.0)
}
