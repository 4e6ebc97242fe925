use std::fmt;
use std::str::FromStr;

use fnv::FnvHashMap;

use crate::error::{Error, Result};

pub const BOS: &str = "<s>";
pub const EOS: &str = "</s>";
pub const UNK: &str = "<unk>";

const BOS_ID: u32 = 0;
const EOS_ID: u32 = 1;
const UNK_ID: u32 = 2;

fn discount(counts: impl Iterator<Item = u32>) -> f64 {
    let (mut n1, mut n2) = (0u64, 0u64);
    for c in counts {
        match c {
            1 => n1 += 1,
            2 => n2 += 1,
            _ => {}
        }
    }
    if n1 == 0 || n1 + 2 * n2 == 0 {
        0.5
    } else {
        n1 as f64 / (n1 + 2 * n2) as f64
    }
}

/// Interpolated Kneser-Ney trigram model with one discount per order.
///
/// The vocabulary is the training types plus `</s>` and `<unk>`; unseen
/// words map to `<unk>`. The unigram level interpolates with the uniform
/// distribution over the vocabulary, which gives `<unk>` its mass.
#[derive(Debug, Clone)]
pub struct NgramModel {
    words: Vec<String>,
    ids: FnvHashMap<String, u32>,
    trigrams: FnvHashMap<(u32, u32, u32), u32>,
    /// (total count, distinct followers) of each trigram context.
    contexts3: FnvHashMap<(u32, u32), (u32, u32)>,
    /// Distinct left extensions of each bigram.
    continuation2: FnvHashMap<(u32, u32), u32>,
    /// (sum of continuation counts, distinct followers) of each word context.
    contexts2: FnvHashMap<u32, (u32, u32)>,
    /// Distinct left neighbours of each word.
    continuation1: FnvHashMap<u32, u32>,
    continuation1_total: u32,
    pub discounts: [f64; 3],
}

/// Trains the model; sentences are padded with two `<s>` and one `</s>`.
pub fn train_kn3<S: AsRef<str>>(corpus: &[Vec<S>]) -> Result<NgramModel> {
    let mut model = NgramModel {
        words: vec![BOS.into(), EOS.into(), UNK.into()],
        ids: FnvHashMap::default(),
        trigrams: FnvHashMap::default(),
        contexts3: FnvHashMap::default(),
        continuation2: FnvHashMap::default(),
        contexts2: FnvHashMap::default(),
        continuation1: FnvHashMap::default(),
        continuation1_total: 0,
        discounts: [0.5; 3],
    };
    for (i, w) in model.words.iter().enumerate() {
        model.ids.insert(w.clone(), i as u32);
    }
    let mut sentences = 0;
    for sentence in corpus.iter().filter(|s| !s.is_empty()) {
        sentences += 1;
        let mut padded = vec![BOS_ID, BOS_ID];
        for token in sentence {
            let token = token.as_ref();
            let id = match model.ids.get(token) {
                Some(&id) => id,
                None => {
                    let id = model.words.len() as u32;
                    model.words.push(token.to_string());
                    model.ids.insert(token.to_string(), id);
                    id
                }
            };
            padded.push(id);
        }
        padded.push(EOS_ID);
        for t in padded.windows(3) {
            *model.trigrams.entry((t[0], t[1], t[2])).or_insert(0) += 1;
        }
    }
    if sentences == 0 {
        return Err(Error::EmptyCorpus);
    }
    for (&(u, v, w), &c) in &model.trigrams {
        let ctx = model.contexts3.entry((u, v)).or_insert((0, 0));
        ctx.0 += c;
        ctx.1 += 1;
        *model.continuation2.entry((v, w)).or_insert(0) += 1;
    }
    for (&(v, w), &c) in &model.continuation2 {
        let ctx = model.contexts2.entry(v).or_insert((0, 0));
        ctx.0 += c;
        ctx.1 += 1;
        *model.continuation1.entry(w).or_insert(0) += 1;
    }
    model.continuation1_total = model.continuation1.values().sum();
    model.discounts = [
        discount(model.continuation1.values().copied()),
        discount(model.continuation2.values().copied()),
        discount(model.trigrams.values().copied()),
    ];
    Ok(model)
}

impl NgramModel {
    /// Vocabulary size used by the uniform base distribution.
    pub fn vocab_size(&self) -> usize {
        self.words.len() - 1
    }

    /// Every word a prediction ranges over (everything but `<s>`).
    pub fn vocabulary(&self) -> Vec<&str> {
        self.words[1..].iter().map(String::as_str).collect()
    }

    /// Observed trigram contexts.
    pub fn trigram_contexts(&self) -> Vec<(&str, &str)> {
        let mut out: Vec<(&str, &str)> = self
            .contexts3
            .keys()
            .map(|&(u, v)| {
                (
                    self.words[u as usize].as_str(),
                    self.words[v as usize].as_str(),
                )
            })
            .collect();
        out.sort();
        out
    }

    /// Observed bigram contexts.
    pub fn bigram_contexts(&self) -> Vec<&str> {
        let mut out: Vec<&str> = self
            .contexts2
            .keys()
            .map(|&v| self.words[v as usize].as_str())
            .collect();
        out.sort();
        out
    }

    fn id(&self, token: &str) -> u32 {
        self.ids.get(token).copied().unwrap_or(UNK_ID)
    }

    fn p1(&self, w: u32) -> f64 {
        let d = self.discounts[0];
        let total = f64::from(self.continuation1_total);
        let uniform = 1.0 / self.vocab_size() as f64;
        let count = f64::from(self.continuation1.get(&w).copied().unwrap_or(0));
        let types = self.continuation1.len() as f64;
        (count - d).max(0.0) / total + d * types / total * uniform
    }

    fn p2(&self, v: u32, w: u32) -> f64 {
        let Some(&(total, types)) = self.contexts2.get(&v) else {
            return self.p1(w);
        };
        let d = self.discounts[1];
        let count = f64::from(self.continuation2.get(&(v, w)).copied().unwrap_or(0));
        let total = f64::from(total);
        (count - d).max(0.0) / total + d * f64::from(types) / total * self.p1(w)
    }

    fn p3(&self, u: u32, v: u32, w: u32) -> f64 {
        let Some(&(total, types)) = self.contexts3.get(&(u, v)) else {
            return self.p2(v, w);
        };
        let d = self.discounts[2];
        let count = f64::from(self.trigrams.get(&(u, v, w)).copied().unwrap_or(0));
        let total = f64::from(total);
        (count - d).max(0.0) / total + d * f64::from(types) / total * self.p2(v, w)
    }

    /// P(word | u v).
    pub fn prob(&self, u: &str, v: &str, word: &str) -> f64 {
        self.p3(self.id(u), self.id(v), self.id(word))
    }

    /// P(word | v) at the bigram level.
    pub fn prob_bigram(&self, v: &str, word: &str) -> f64 {
        self.p2(self.id(v), self.id(word))
    }

    /// Natural-log probability of a sentence including `</s>`, and the
    /// number of predicted tokens.
    pub fn sentence_log_prob<S: AsRef<str>>(&self, sentence: &[S]) -> (f64, usize) {
        let mut ids = vec![BOS_ID, BOS_ID];
        ids.extend(sentence.iter().map(|t| self.id(t.as_ref())));
        ids.push(EOS_ID);
        let logp = ids
            .windows(3)
            .map(|t| {
                let p = self.p3(t[0], t[1], t[2]);
                assert!(p > 0.0, "smoothing left a zero probability");
                p.ln()
            })
            .sum();
        (logp, ids.len() - 2)
    }

    /// P(sentence)^(-1/N) with N the token count plus one for `</s>`.
    pub fn sentence_perplexity<S: AsRef<str>>(&self, sentence: &[S]) -> f64 {
        let (logp, n) = self.sentence_log_prob(sentence);
        (-logp / n as f64).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PplMode {
    /// Sum of per-sentence perplexities.
    Summed,
    /// Summed divided by the number of sentences.
    #[default]
    Mean,
}

impl fmt::Display for PplMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PplMode::Summed => "summed",
            PplMode::Mean => "mean",
        })
    }
}

impl FromStr for PplMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "summed" => Ok(PplMode::Summed),
            "mean" => Ok(PplMode::Mean),
            _ => Err(Error::Config(format!(
                "unknown perplexity mode `{s}` (expected summed or mean)"
            ))),
        }
    }
}

pub fn perplexity<S: AsRef<str>>(
    model: &NgramModel,
    target: &[Vec<S>],
    mode: PplMode,
) -> Result<f64> {
    let sentences: Vec<&Vec<S>> = target.iter().filter(|s| !s.is_empty()).collect();
    if sentences.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let summed: f64 = sentences.iter().map(|s| model.sentence_perplexity(s)).sum();
    Ok(match mode {
        PplMode::Summed => summed,
        PplMode::Mean => summed / sentences.len() as f64,
    })
}
