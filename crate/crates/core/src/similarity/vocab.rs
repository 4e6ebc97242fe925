use std::collections::{BTreeMap, BTreeSet};

use crate::augment::StopWords;
use crate::error::{Error, Result};

/// Which tokens count as content words.
#[derive(Debug, Clone)]
pub struct ContentFilter {
    pub stopwords: StopWords,
    pub min_len: usize,
    /// Tokens are `word/TAG`; only noun, verb and adjective tags are kept.
    pub pos_tagged: bool,
}

impl Default for ContentFilter {
    fn default() -> Self {
        ContentFilter {
            stopwords: StopWords::default(),
            min_len: 2,
            pos_tagged: false,
        }
    }
}

impl ContentFilter {
    /// The lowercased content word for `token`, if it is one.
    pub fn content_word(&self, token: &str) -> Option<String> {
        let word = if self.pos_tagged {
            let (word, tag) = token.rsplit_once('/')?;
            if !["NN", "VB", "JJ"].iter().any(|p| tag.starts_with(p)) {
                return None;
            }
            word
        } else {
            token
        };
        let word = word.to_lowercase();
        let keep = word.chars().count() >= self.min_len
            && word.chars().any(char::is_alphanumeric)
            && !self.stopwords.contains(&word);
        keep.then_some(word)
    }

    pub fn describe(&self) -> String {
        if self.pos_tagged {
            "content words: NN*/VB*/JJ* tags, stop words removed".to_string()
        } else {
            format!(
                "content words: stop words removed, length >= {}",
                self.min_len
            )
        }
    }
}

/// Content-word types of a corpus with their counts.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VocabProfile {
    pub types: BTreeMap<String, usize>,
    pub tokens: usize,
}

impl VocabProfile {
    pub fn build<S: AsRef<str>>(sentences: &[Vec<S>], filter: &ContentFilter) -> VocabProfile {
        let mut profile = VocabProfile::default();
        for token in sentences.iter().flatten() {
            if let Some(w) = filter.content_word(token.as_ref()) {
                *profile.types.entry(w).or_insert(0) += 1;
                profile.tokens += 1;
            }
        }
        profile
    }

    /// A profile whose types are exactly `words`, lowercased.
    pub fn from_words<'a>(words: impl IntoIterator<Item = &'a str>) -> VocabProfile {
        let mut profile = VocabProfile::default();
        for w in words {
            *profile.types.entry(w.to_lowercase()).or_insert(0) += 1;
            profile.tokens += 1;
        }
        profile
    }

    pub fn type_set(&self) -> BTreeSet<&str> {
        self.types.keys().map(String::as_str).collect()
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    fn shared(&self, other: &VocabProfile) -> usize {
        self.types
            .keys()
            .filter(|k| other.types.contains_key(*k))
            .count()
    }
}

/// Target vocabulary coverage: share of target types seen in the source.
pub fn tvc(source: &VocabProfile, target: &VocabProfile) -> Result<f64> {
    if target.is_empty() {
        return Err(Error::Similarity("target vocabulary is empty".into()));
    }
    Ok(source.shared(target) as f64 / target.len() as f64)
}

/// Jaccard similarity of the two type sets.
pub fn jsv(source: &VocabProfile, target: &VocabProfile) -> Result<f64> {
    let shared = source.shared(target);
    let union = source.len() + target.len() - shared;
    if union == 0 {
        return Err(Error::Similarity("both vocabularies are empty".into()));
    }
    Ok(shared as f64 / union as f64)
}
