use std::collections::BTreeMap;
use std::hash::Hasher;

use fnv::FnvHasher;

use crate::corpus::Sentence;
use crate::transition::{ParserState, StackSpan};

/// Sparse feature counts keyed by hashed feature name.
///
/// Entries are kept sorted by id so dot products sum in a fixed order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FeatureVector {
    entries: Vec<(u64, u32)>,
}

impl FeatureVector {
    pub fn from_names<'a>(names: impl IntoIterator<Item = &'a str>) -> Self {
        let mut counts: BTreeMap<u64, u32> = BTreeMap::new();
        for name in names {
            *counts.entry(feature_id(name)).or_insert(0) += 1;
        }
        FeatureVector {
            entries: counts.into_iter().collect(),
        }
    }

    pub fn entries(&self) -> &[(u64, u32)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn count(&self, name: &str) -> u32 {
        let id = feature_id(name);
        self.entries
            .binary_search_by_key(&id, |&(f, _)| f)
            .map_or(0, |i| self.entries[i].1)
    }
}

/// 64-bit FNV-1a hash of a feature name.
pub fn feature_id(name: &str) -> u64 {
    let mut h = FnvHasher::default();
    h.write(name.as_bytes());
    h.finish()
}

/// Capitalization and digit pattern with repeated classes collapsed:
/// `Lipitor` -> `Xx`, `20mg` -> `dx`.
pub fn word_shape(token: &str) -> String {
    let mut shape = String::new();
    for c in token.chars() {
        let class = if c.is_uppercase() {
            'X'
        } else if c.is_lowercase() {
            'x'
        } else if c.is_ascii_digit() {
            'd'
        } else {
            c
        };
        if !shape.ends_with(class) {
            shape.push(class);
        }
    }
    shape
}

const EMPTY: &str = "<EMPTY>";
const END: &str = "<END>";

fn lower(sentence: &Sentence, position: usize) -> String {
    sentence.tokens[position].to_lowercase()
}

fn span_features(out: &mut Vec<String>, name: &str, span: Option<&StackSpan>, sentence: &Sentence) {
    let Some(span) = span else {
        out.push(format!("{name}={EMPTY}"));
        return;
    };
    let first = lower(sentence, span.first());
    let last = lower(sentence, span.last());
    out.push(format!("{name}.first={first}"));
    out.push(format!("{name}.last={last}"));
    out.push(format!(
        "{name}.last.shape={}",
        word_shape(&sentence.tokens[span.last()])
    ));
    for &p in &span.positions {
        out.push(format!("{name}.w={}", lower(sentence, p)));
    }
    out.push(format!("{name}.disc={}", span.is_discontinuous()));
    out.push(format!("{name}.len={}", span.positions.len().min(4)));
}

/// Feature names for a parser state, in emission order.
pub fn feature_names(state: &ParserState, sentence: &Sentence) -> Vec<String> {
    let mut out = vec!["bias".to_string()];
    let s0 = state.stack_span(0);
    let s1 = state.stack_span(1);
    span_features(&mut out, "s0", s0, sentence);
    span_features(&mut out, "s1", s1, sentence);
    span_features(&mut out, "s2", state.stack_span(2), sentence);
    out.push(format!("depth={}", state.stack.len().min(3)));

    let buffer: Vec<String> = (0..3)
        .map(|k| {
            let p = state.buffer_index + k;
            if p < sentence.len() {
                lower(sentence, p)
            } else {
                END.to_string()
            }
        })
        .collect();
    for (k, tok) in buffer.iter().enumerate() {
        out.push(format!("b{k}={tok}"));
    }
    if state.buffer_index < sentence.len() {
        out.push(format!(
            "b0.shape={}",
            word_shape(&sentence.tokens[state.buffer_index])
        ));
    }

    let prev = state.history.last().map_or(EMPTY, |a| a.kind().name());
    out.push(format!("prev={prev}"));

    let s0_last = s0.map_or(EMPTY.to_string(), |s| lower(sentence, s.last()));
    let s1_last = s1.map_or(EMPTY.to_string(), |s| lower(sentence, s.last()));
    let b0 = &buffer[0];
    out.push(format!("s0.last*b0={s0_last}|{b0}"));
    out.push(format!("s1.last*b0={s1_last}|{b0}"));
    out.push(format!("s1.last*s0.last={s1_last}|{s0_last}"));
    out.push(format!("prev*s0.last={prev}|{s0_last}"));
    if let (Some(a), Some(b)) = (s1, s0) {
        let gap = if b.first() > a.last() {
            (b.first() - a.last() - 1).min(3).to_string()
        } else {
            "x".to_string()
        };
        out.push(format!("gap(s1,s0)={gap}"));
        out.push(format!("gap*s0.last={gap}|{s0_last}"));
    }
    out
}

/// Hashed features for a parser state.
pub fn extract_features(state: &ParserState, sentence: &Sentence) -> FeatureVector {
    let names = feature_names(state, sentence);
    FeatureVector::from_names(names.iter().map(String::as_str))
}
