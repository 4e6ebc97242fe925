//! Training-set augmentation: label-wise token replacement (LwTR), synonym
//! replacement (SR), mention replacement (MR) and shuffle within segments
//! (SiS).

mod resources;
mod transforms;

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::corpus::AnnotatedSentence;
use crate::error::{Error, Result};

pub use resources::{LabelwiseDistribution, MentionPool, StopWords, SynonymLexicon};
pub use transforms::{lwtr, mention_replace, shuffle_within_segments, synonym_replace};

/// Instances-per-original values searched during tuning.
pub const PER_INSTANCE_GRID: [usize; 4] = [1, 3, 6, 10];
/// Replacement probabilities searched during tuning.
pub const P_GRID: [f64; 4] = [0.1, 0.3, 0.5, 0.7];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    LwTR,
    SR,
    MR,
    SiS,
    All,
}

impl Method {
    pub const SINGLE: [Method; 4] = [Method::LwTR, Method::SR, Method::MR, Method::SiS];

    pub fn name(self) -> &'static str {
        match self {
            Method::LwTR => "lwtr",
            Method::SR => "sr",
            Method::MR => "mr",
            Method::SiS => "sis",
            Method::All => "all",
        }
    }

    /// The transforms applied per round.
    pub fn expand(self) -> Vec<Method> {
        match self {
            Method::All => Method::SINGLE.to_vec(),
            m => vec![m],
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "lwtr" => Ok(Method::LwTR),
            "sr" => Ok(Method::SR),
            "mr" => Ok(Method::MR),
            "sis" => Ok(Method::SiS),
            "all" => Ok(Method::All),
            _ => Err(Error::Config(format!(
                "unknown augmentation method `{s}` (expected lwtr, sr, mr, sis or all)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AugmentConfig {
    pub method: Method,
    pub p: f64,
    pub per_instance: usize,
    pub seed: u64,
    /// Let MR replace the covering region of discontinuous mentions.
    pub mr_discontinuous: bool,
}

impl Default for AugmentConfig {
    fn default() -> Self {
        AugmentConfig {
            method: Method::All,
            p: 0.3,
            per_instance: 1,
            seed: 0,
            mr_discontinuous: false,
        }
    }
}

impl AugmentConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.p) {
            return Err(Error::Config(format!(
                "p must lie in [0, 1], got {}",
                self.p
            )));
        }
        if self.per_instance == 0 {
            return Err(Error::Config("per_instance must be at least 1".into()));
        }
        Ok(())
    }
}

/// Per-token labels: `O`, or for each covering mention `B-X` at the start
/// of one of its components and `I-X` elsewhere, joined by `|`. On flat
/// sentences this is the BIO tag sequence.
pub fn token_labels(annotated: &AnnotatedSentence) -> Vec<String> {
    (0..annotated.sentence.len())
        .map(|p| {
            let mut parts: Vec<String> = annotated
                .mentions
                .iter()
                .filter(|m| m.contains(p))
                .map(|m| {
                    let prefix = if p > 0 && m.contains(p - 1) { "I" } else { "B" };
                    format!("{prefix}-{}", m.category())
                })
                .collect();
            if parts.is_empty() {
                return "O".to_string();
            }
            parts.sort();
            parts.join("|")
        })
        .collect()
}

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Seed for one augmented instance, independent of processing order.
pub fn instance_seed(seed: u64, instance: usize, round: usize, method: Method) -> u64 {
    [instance as u64, round as u64, method as u64]
        .into_iter()
        .fold(splitmix(seed), |h, x| splitmix(h ^ splitmix(x)))
}

/// Augmentation resources built once from the training corpus.
pub struct Augmenter {
    pub config: AugmentConfig,
    pub stopwords: StopWords,
    pub lexicon: Option<SynonymLexicon>,
    pub distribution: LabelwiseDistribution,
    pub pool: MentionPool,
}

impl Augmenter {
    pub fn new(
        config: AugmentConfig,
        corpus: &[AnnotatedSentence],
        stopwords: StopWords,
        lexicon: Option<SynonymLexicon>,
    ) -> Result<Augmenter> {
        config.validate()?;
        if lexicon.is_none() && config.method.expand().contains(&Method::SR) {
            return Err(Error::Config("synonym replacement needs a lexicon".into()));
        }
        Ok(Augmenter {
            distribution: LabelwiseDistribution::build(corpus),
            pool: MentionPool::build(corpus),
            config,
            stopwords,
            lexicon,
        })
    }

    /// One transform of one instance with its derived seed.
    pub fn transform(
        &self,
        annotated: &AnnotatedSentence,
        method: Method,
        instance: usize,
        round: usize,
    ) -> Result<AnnotatedSentence> {
        let mut rng =
            ChaCha8Rng::seed_from_u64(instance_seed(self.config.seed, instance, round, method));
        let p = self.config.p;
        let mut out = match method {
            Method::LwTR => lwtr(annotated, &self.distribution, &self.stopwords, p, &mut rng),
            Method::SR => {
                let lexicon = self
                    .lexicon
                    .as_ref()
                    .ok_or_else(|| Error::Config("synonym replacement needs a lexicon".into()))?;
                synonym_replace(annotated, lexicon, &self.stopwords, p, &mut rng)
            }
            Method::MR => mention_replace(
                annotated,
                &self.pool,
                p,
                self.config.mr_discontinuous,
                &mut rng,
            ),
            Method::SiS => shuffle_within_segments(annotated, p, &mut rng)?,
            Method::All => {
                return Err(Error::Config("`all` is not a single transform".into()));
            }
        };
        out.sentence.doc_id = format!("{}+aug{round}.{method}", annotated.sentence.doc_id);
        out.validate()?;
        Ok(out)
    }

    /// Originals first, then for each original, round and method one
    /// augmented instance, in that order.
    pub fn augment_corpus(&self, corpus: &[AnnotatedSentence]) -> Result<Vec<AnnotatedSentence>> {
        let methods = self.config.method.expand();
        let rounds = self.config.per_instance;
        let augmented: Vec<Vec<AnnotatedSentence>> = corpus
            .par_iter()
            .enumerate()
            .map(|(i, a)| {
                let mut out = Vec::with_capacity(rounds * methods.len());
                for round in 0..rounds {
                    for &method in &methods {
                        out.push(self.transform(a, method, i, round)?);
                    }
                }
                Ok(out)
            })
            .collect::<Result<_>>()?;
        let mut out = corpus.to_vec();
        out.extend(augmented.into_iter().flatten());
        Ok(out)
    }
}

/// Builds an [`Augmenter`] from `corpus` and augments it.
pub fn augment_corpus(
    corpus: &[AnnotatedSentence],
    config: &AugmentConfig,
    stopwords: StopWords,
    lexicon: Option<SynonymLexicon>,
) -> Result<Vec<AnnotatedSentence>> {
    Augmenter::new(config.clone(), corpus, stopwords, lexicon)?.augment_corpus(corpus)
}
