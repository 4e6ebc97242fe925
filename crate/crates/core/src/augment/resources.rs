use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::Rng;

use super::token_labels;
use crate::corpus::AnnotatedSentence;
use crate::error::{Error, Result};

const DEFAULT_STOPWORDS: &str = include_str!("../../resources/stopwords.txt");

/// Lowercased words never replaced by LwTR or SR.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StopWords(HashSet<String>);

impl StopWords {
    /// One word per line; `#` starts a comment line.
    pub fn parse(text: &str) -> StopWords {
        StopWords(
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(str::to_lowercase)
                .collect(),
        )
    }

    pub fn from_file(path: &Path) -> Result<StopWords> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
        Ok(StopWords::parse(&text))
    }

    pub fn empty() -> StopWords {
        StopWords(HashSet::new())
    }

    pub fn contains(&self, token: &str) -> bool {
        self.0.contains(&token.to_lowercase())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Default for StopWords {
    /// The packaged English list.
    fn default() -> Self {
        StopWords::parse(DEFAULT_STOPWORDS)
    }
}

/// Lowercased token to synonyms, each synonym one or more tokens.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SynonymLexicon {
    entries: BTreeMap<String, Vec<Vec<String>>>,
}

impl SynonymLexicon {
    /// Lines of `token<TAB>synonym|synonym...`; multiword synonyms are
    /// space separated. Synonyms equal to the token are ignored.
    pub fn parse(text: &str, origin: &str) -> Result<SynonymLexicon> {
        let mut entries: BTreeMap<String, Vec<Vec<String>>> = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((token, synonyms)) = line.split_once('\t') else {
                return Err(Error::Format {
                    path: origin.to_string(),
                    line: i + 1,
                    message: "expected `token<TAB>synonym|synonym...`".into(),
                });
            };
            let key = token.trim().to_lowercase();
            if key.is_empty() || key.contains(char::is_whitespace) {
                return Err(Error::Format {
                    path: origin.to_string(),
                    line: i + 1,
                    message: format!("bad lexicon token `{token}`"),
                });
            }
            let list = entries.entry(key.clone()).or_default();
            for syn in synonyms.split('|') {
                let words: Vec<String> = syn.split_whitespace().map(str::to_string).collect();
                let is_self = words.len() == 1 && words[0].to_lowercase() == key;
                if !words.is_empty() && !is_self && !list.contains(&words) {
                    list.push(words);
                }
            }
        }
        entries.retain(|_, v| !v.is_empty());
        Ok(SynonymLexicon { entries })
    }

    pub fn from_file(path: &Path) -> Result<SynonymLexicon> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
        SynonymLexicon::parse(&text, &path.display().to_string())
    }

    pub fn synonyms(&self, token: &str) -> Option<&[Vec<String>]> {
        self.entries.get(&token.to_lowercase()).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone)]
struct LabelEntry {
    words: Vec<String>,
    weights: Vec<u32>,
    index: WeightedIndex<u32>,
}

/// Tokens observed under each token label, weighted by frequency.
#[derive(Debug, Clone)]
pub struct LabelwiseDistribution {
    by_label: BTreeMap<String, LabelEntry>,
}

impl LabelwiseDistribution {
    pub fn build(corpus: &[AnnotatedSentence]) -> LabelwiseDistribution {
        let mut counts: BTreeMap<String, BTreeMap<String, u32>> = BTreeMap::new();
        for a in corpus {
            for (token, label) in a.sentence.tokens.iter().zip(token_labels(a)) {
                *counts
                    .entry(label)
                    .or_default()
                    .entry(token.clone())
                    .or_insert(0) += 1;
            }
        }
        let by_label = counts
            .into_iter()
            .map(|(label, tokens)| {
                let (words, weights): (Vec<String>, Vec<u32>) = tokens.into_iter().unzip();
                let index = WeightedIndex::new(&weights).expect("counts are positive");
                (
                    label,
                    LabelEntry {
                        words,
                        weights,
                        index,
                    },
                )
            })
            .collect();
        LabelwiseDistribution { by_label }
    }

    /// How often `token` bore `label` in the source corpus.
    pub fn count(&self, label: &str, token: &str) -> u32 {
        self.by_label.get(label).map_or(0, |entry| {
            entry
                .words
                .iter()
                .position(|w| w == token)
                .map_or(0, |i| entry.weights[i])
        })
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.by_label.keys().map(String::as_str)
    }

    pub fn sample<R: Rng>(&self, label: &str, rng: &mut R) -> Option<&str> {
        self.by_label
            .get(label)
            .map(|e| e.words[e.index.sample(rng)].as_str())
    }
}

/// Token sequences of continuous mentions, per category, in corpus order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MentionPool {
    by_category: BTreeMap<String, Vec<Vec<String>>>,
}

impl MentionPool {
    pub fn build(corpus: &[AnnotatedSentence]) -> MentionPool {
        let mut by_category: BTreeMap<String, Vec<Vec<String>>> = BTreeMap::new();
        for a in corpus {
            for m in a.mentions.iter().filter(|m| m.is_continuous()) {
                let tokens = m
                    .positions()
                    .iter()
                    .map(|&p| a.sentence.tokens[p].clone())
                    .collect();
                by_category
                    .entry(m.category().to_string())
                    .or_default()
                    .push(tokens);
            }
        }
        MentionPool { by_category }
    }

    pub fn size(&self, category: &str) -> usize {
        self.by_category.get(category).map_or(0, Vec::len)
    }

    pub fn sample<R: Rng>(&self, category: &str, rng: &mut R) -> Option<&[String]> {
        self.by_category
            .get(category)
            .and_then(|v| v.choose(rng))
            .map(Vec::as_slice)
    }
}
