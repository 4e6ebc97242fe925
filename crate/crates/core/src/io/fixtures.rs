use std::str::FromStr;

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{AnnotatedSentence, Mention, OverlapCategory, Sentence};
use crate::error::{Error, Result};

/// Category mix for generated sentences. Weights must sum to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct FixtureSpec {
    pub weights: Vec<(OverlapCategory, f64)>,
}

impl FixtureSpec {
    pub fn only(category: OverlapCategory) -> FixtureSpec {
        FixtureSpec {
            weights: vec![(category, 1.0)],
        }
    }

    /// Equal shares of every category the oracle fully reaches.
    pub fn reachable() -> FixtureSpec {
        let cats: Vec<OverlapCategory> = OverlapCategory::ALL
            .into_iter()
            .filter(|c| *c != OverlapCategory::MultiOverlap)
            .collect();
        let w = 1.0 / cats.len() as f64;
        FixtureSpec {
            weights: cats.into_iter().map(|c| (c, w)).collect(),
        }
    }

    /// Equal shares of all six categories.
    pub fn all() -> FixtureSpec {
        FixtureSpec {
            weights: OverlapCategory::ALL
                .into_iter()
                .map(|c| (c, 1.0 / 6.0))
                .collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.weights.iter().any(|(_, w)| !w.is_finite() || *w < 0.0) {
            return Err(Error::Config(
                "fixture weights must be finite and non-negative".into(),
            ));
        }
        let total: f64 = self.weights.iter().map(|(_, w)| w).sum();
        if total <= 0.0 {
            return Err(Error::Config("fixture weights sum to zero".into()));
        }
        if (total - 1.0).abs() > 1e-6 {
            return Err(Error::Config(format!(
                "fixture weights sum to {total}, not 1"
            )));
        }
        Ok(())
    }
}

impl FromStr for FixtureSpec {
    type Err = Error;

    /// `LeftOverlap=0.5,RightOverlap=0.5`
    fn from_str(s: &str) -> Result<Self> {
        let mut weights = Vec::new();
        for part in s.split(',').filter(|p| !p.trim().is_empty()) {
            let (name, w) = part.split_once('=').ok_or_else(|| {
                Error::Config(format!("expected `Category=weight`, got `{part}`"))
            })?;
            let w: f64 = w
                .trim()
                .parse()
                .map_err(|_| Error::Config(format!("bad weight `{w}`")))?;
            weights.push((name.trim().parse()?, w));
        }
        let spec = FixtureSpec { weights };
        spec.validate()?;
        Ok(spec)
    }
}

const ISOLATED_MODIFIERS: [&str; 2] = ["severe", "mild"];
const ISOLATED_ADE: [&str; 3] = ["headache", "nausea", "rash"];
const DRUGS: [&str; 3] = ["aspirin", "ibuprofen", "lipitor"];
const NO_OVERLAP_HEADS: [&str; 2] = ["stomach", "throat"];
const NO_OVERLAP_TAILS: [&str; 2] = ["upset", "sore"];
const LEFT_HEADS: [&str; 2] = ["back", "neck"];
const LEFT_BODIES: [&str; 3] = ["stiff", "aching", "tender"];
const RIGHT_BODIES: [&str; 3] = ["hip", "knee", "ankle"];
const RIGHT_HEADS: [&str; 2] = ["swelling", "stiffness"];
const MULTI_FIRST: [&str; 2] = ["arm", "leg"];
const MULTI_SECOND: [&str; 2] = ["cramps", "numbness"];

/// Tokens and mentions relative to the instance start.
struct Instance {
    tokens: Vec<&'static str>,
    mentions: Vec<(Vec<usize>, &'static str)>,
}

fn pick<R: Rng>(rng: &mut R, words: &[&'static str]) -> &'static str {
    words.choose(rng).copied().unwrap()
}

/// `a , b and c` with the positions of the listed words.
fn listing(words: &[&'static str]) -> (Vec<&'static str>, Vec<usize>) {
    let mut tokens = Vec::new();
    let mut at = Vec::new();
    for (i, w) in words.iter().enumerate() {
        if i > 0 {
            tokens.push(if i + 1 == words.len() { "and" } else { "," });
        }
        at.push(tokens.len());
        tokens.push(*w);
    }
    (tokens, at)
}

fn distinct<R: Rng>(rng: &mut R, words: &[&'static str], n: usize) -> Vec<&'static str> {
    words.choose_multiple(rng, n).copied().collect()
}

fn instance<R: Rng>(category: OverlapCategory, rng: &mut R) -> Instance {
    match category {
        OverlapCategory::ContinuousIsolated => {
            if rng.gen_bool(0.5) {
                let mut tokens = Vec::new();
                if rng.gen_bool(0.5) {
                    tokens.push(pick(rng, &ISOLATED_MODIFIERS));
                }
                tokens.push(pick(rng, &ISOLATED_ADE));
                let positions = (0..tokens.len()).collect();
                Instance {
                    tokens,
                    mentions: vec![(positions, "ADE")],
                }
            } else {
                Instance {
                    tokens: vec!["after", "taking", pick(rng, &DRUGS)],
                    mentions: vec![(vec![2], "Drug")],
                }
            }
        }
        OverlapCategory::ContinuousOverlap => {
            if rng.gen_bool(0.5) {
                Instance {
                    tokens: vec!["chest", "tightness", "spasm"],
                    mentions: vec![(vec![0, 1], "ADE"), (vec![1, 2], "ADE")],
                }
            } else {
                Instance {
                    tokens: vec!["blurred", "vision", "loss"],
                    mentions: vec![(vec![0, 1, 2], "ADE"), (vec![1], "ADE")],
                }
            }
        }
        OverlapCategory::NoOverlap => Instance {
            tokens: vec![
                pick(rng, &NO_OVERLAP_HEADS),
                "is",
                "mildly",
                pick(rng, &NO_OVERLAP_TAILS),
            ],
            mentions: vec![(vec![0, 3], "ADE")],
        },
        OverlapCategory::LeftOverlap => {
            let n = rng.gen_range(2..=3);
            let (list, at) = listing(&distinct(rng, &LEFT_BODIES, n));
            let mut tokens = vec![pick(rng, &LEFT_HEADS), "was"];
            tokens.extend(list);
            Instance {
                tokens,
                mentions: at.iter().map(|&b| (vec![0, b + 2], "ADE")).collect(),
            }
        }
        OverlapCategory::RightOverlap => {
            let n = rng.gen_range(2..=3);
            let (mut tokens, at) = listing(&distinct(rng, &RIGHT_BODIES, n));
            tokens.push("joint");
            let head = tokens.len();
            tokens.push(pick(rng, &RIGHT_HEADS));
            Instance {
                tokens,
                mentions: at.iter().map(|&b| (vec![b, head], "ADE")).collect(),
            }
        }
        OverlapCategory::MultiOverlap => {
            let first = distinct(rng, &MULTI_FIRST, 2);
            let second = distinct(rng, &MULTI_SECOND, 2);
            Instance {
                tokens: vec![first[0], "and", first[1], "area", second[0], "/", second[1]],
                mentions: vec![
                    (vec![0, 4], "ADE"),
                    (vec![0, 6], "ADE"),
                    (vec![2, 4], "ADE"),
                    (vec![2, 6], "ADE"),
                ],
            }
        }
    }
}

/// Generates `n` sentences over a closed vocabulary. Each sentence holds
/// one or two instances of a single category drawn from `spec`, and every
/// mention in it classifies to that category.
pub fn generate_fixtures(
    spec: &FixtureSpec,
    n: usize,
    seed: u64,
) -> Result<Vec<AnnotatedSentence>> {
    spec.validate()?;
    let index = WeightedIndex::new(spec.weights.iter().map(|(_, w)| *w))
        .map_err(|e| Error::Config(format!("fixture weights: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut corpus = Vec::with_capacity(n);
    for i in 0..n {
        let category = spec.weights[index.sample(&mut rng)].0;
        let mut tokens: Vec<&str> = vec!["i", "had"];
        let mut mentions = Vec::new();
        let count = rng.gen_range(1..=2);
        for k in 0..count {
            if k > 0 {
                tokens.push("with");
            }
            let inst = instance(category, &mut rng);
            let offset = tokens.len();
            tokens.extend(inst.tokens);
            for (positions, cat) in inst.mentions {
                let shifted = positions.into_iter().map(|p| p + offset).collect();
                mentions.push(Mention::new(shifted, cat)?);
            }
        }
        tokens.push(".");
        let sentence = Sentence::new(tokens, "fixture", i)?;
        corpus.push(AnnotatedSentence::new(sentence, mentions)?);
    }
    Ok(corpus)
}
