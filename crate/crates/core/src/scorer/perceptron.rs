use std::collections::BTreeSet;
use std::io::{Read, Write};

use fnv::FnvHashMap;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::features::{extract_features, FeatureVector};
use crate::corpus::{AnnotatedSentence, Sentence};
use crate::error::{Error, Result};
use crate::transition::{
    argmax, candidate_actions, oracle, Action, ActionKind, ActionScorer, ParserState,
};

const MAGIC: &[u8; 8] = b"DNERPCPT";
const VERSION: u32 = 1;

/// Action inventory for a category set: the non-COMPLETE kinds plus one
/// COMPLETE per category, in tie-break order.
pub fn action_inventory(categories: &[String]) -> Vec<Action> {
    let mut out = Vec::new();
    for kind in ActionKind::ALL {
        if kind == ActionKind::Complete {
            out.extend(categories.iter().map(|c| Action::Complete(c.clone())));
        } else {
            out.push(Action::from_kind(kind, ""));
        }
    }
    out
}

/// Averaged perceptron over hashed state features.
///
/// Stored weights are the averaged ones; the model is frozen after training.
#[derive(Debug, Clone, PartialEq)]
pub struct PerceptronModel {
    categories: Vec<String>,
    actions: Vec<Action>,
    weights: FnvHashMap<u64, Vec<f64>>,
    update_count: u64,
}

impl PerceptronModel {
    /// A model with all weights zero.
    pub fn zero(categories: Vec<String>) -> Self {
        let actions = action_inventory(&categories);
        PerceptronModel {
            categories,
            actions,
            weights: FnvHashMap::default(),
            update_count: 0,
        }
    }

    pub fn actions(&self) -> &[Action] {
        &self.actions
    }

    /// Training steps the stored weights were averaged over.
    pub fn update_count(&self) -> u64 {
        self.update_count
    }

    pub fn action_index(&self, action: &Action) -> Option<usize> {
        self.actions.iter().position(|a| a == action)
    }

    /// Sets one weight directly.
    pub fn set_weight(&mut self, feature: u64, action: &Action, weight: f64) -> Result<()> {
        let idx = self
            .action_index(action)
            .ok_or_else(|| Error::UnknownAction(action.to_string()))?;
        let n = self.actions.len();
        self.weights.entry(feature).or_insert_with(|| vec![0.0; n])[idx] = weight;
        Ok(())
    }

    fn dot(&self, fv: &FeatureVector, idx: usize) -> f64 {
        fv.entries()
            .iter()
            .filter_map(|(f, c)| self.weights.get(f).map(|row| row[idx] * f64::from(*c)))
            .sum()
    }

    /// Number of non-zero weights.
    pub fn nonzero_weights(&self) -> usize {
        self.weights
            .values()
            .map(|row| row.iter().filter(|w| **w != 0.0).count())
            .sum()
    }

    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        let mut buf = Vec::new();
        buf.extend_from_slice(MAGIC);
        buf.extend_from_slice(&VERSION.to_le_bytes());
        buf.extend_from_slice(&(self.categories.len() as u32).to_le_bytes());
        for c in &self.categories {
            buf.extend_from_slice(&(c.len() as u32).to_le_bytes());
            buf.extend_from_slice(c.as_bytes());
        }
        buf.extend_from_slice(&self.update_count.to_le_bytes());
        let mut triples: Vec<(u64, u32, f64)> = self
            .weights
            .iter()
            .flat_map(|(&f, row)| {
                row.iter()
                    .enumerate()
                    .filter(|(_, w)| **w != 0.0)
                    .map(move |(a, &w)| (f, a as u32, w))
            })
            .collect();
        triples.sort_by_key(|t| (t.0, t.1));
        buf.extend_from_slice(&(triples.len() as u64).to_le_bytes());
        for (f, a, wt) in triples {
            buf.extend_from_slice(&f.to_le_bytes());
            buf.extend_from_slice(&a.to_le_bytes());
            buf.extend_from_slice(&wt.to_le_bytes());
        }
        w.write_all(&buf).map_err(|e| Error::io("writing model", e))
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.write_to(&mut out).expect("writing to memory");
        out
    }

    pub fn read_from(mut r: impl Read) -> Result<Self> {
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)
            .map_err(|e| Error::io("reading model", e))?;
        Self::from_bytes(&bytes)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut cur = Cursor { bytes, pos: 0 };
        if cur.take(8)? != MAGIC {
            return Err(Error::Model("not a model file".into()));
        }
        let version = cur.u32()?;
        if version != VERSION {
            return Err(Error::Model(format!("unsupported version {version}")));
        }
        let n = cur.u32()? as usize;
        let mut categories = Vec::with_capacity(n.min(1024));
        for _ in 0..n {
            let len = cur.u32()? as usize;
            let raw = cur.take(len)?;
            let c = std::str::from_utf8(raw)
                .map_err(|_| Error::Model("category is not UTF-8".into()))?;
            categories.push(c.to_string());
        }
        let mut model = PerceptronModel::zero(categories);
        model.update_count = cur.u64()?;
        let count = cur.u64()?;
        let width = model.actions.len();
        for _ in 0..count {
            let f = cur.u64()?;
            let a = cur.u32()? as usize;
            let w = f64::from_le_bytes(cur.take(8)?.try_into().unwrap());
            if a >= width {
                return Err(Error::Model(format!("action index {a} out of range")));
            }
            model.weights.entry(f).or_insert_with(|| vec![0.0; width])[a] = w;
        }
        if cur.pos != bytes.len() {
            return Err(Error::Model("trailing bytes".into()));
        }
        Ok(model)
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.bytes.len())
            .ok_or_else(|| Error::Model("truncated model file".into()))?;
        let out = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

/// Dot product of `fv` with the weights of `action`.
pub fn score(model: &PerceptronModel, fv: &FeatureVector, action: &Action) -> Result<f64> {
    let idx = model
        .action_index(action)
        .ok_or_else(|| Error::UnknownAction(action.to_string()))?;
    Ok(model.dot(fv, idx))
}

impl ActionScorer for PerceptronModel {
    fn categories(&self) -> &[String] {
        &self.categories
    }

    fn score(&self, state: &ParserState, sentence: &Sentence, candidates: &[Action]) -> Vec<f64> {
        let fv = extract_features(state, sentence);
        candidates
            .iter()
            .map(|a| {
                self.action_index(a)
                    .map_or(f64::NEG_INFINITY, |i| self.dot(&fv, i))
            })
            .collect()
    }
}

#[derive(Clone, Copy, Default)]
struct Cell {
    weight: f64,
    /// Sum of this weight's values over training steps up to `stamp`.
    total: f64,
    stamp: u64,
}

struct Trainer {
    width: usize,
    cells: FnvHashMap<u64, Vec<Cell>>,
    /// Training steps seen, including the current one.
    steps: u64,
}

impl Trainer {
    fn dot(&self, fv: &FeatureVector, idx: usize) -> f64 {
        fv.entries()
            .iter()
            .filter_map(|(f, c)| self.cells.get(f).map(|row| row[idx].weight * f64::from(*c)))
            .sum()
    }

    fn update(&mut self, fv: &FeatureVector, gold: usize, predicted: usize) {
        let before = self.steps - 1;
        for &(f, c) in fv.entries() {
            let row = self
                .cells
                .entry(f)
                .or_insert_with(|| vec![Cell::default(); self.width]);
            for (idx, delta) in [(gold, f64::from(c)), (predicted, -f64::from(c))] {
                let cell = &mut row[idx];
                cell.total += cell.weight * (before - cell.stamp) as f64;
                cell.stamp = before;
                cell.weight += delta;
            }
        }
    }

    fn averaged(self, categories: Vec<String>) -> PerceptronModel {
        let mut model = PerceptronModel::zero(categories);
        model.update_count = self.steps;
        if self.steps == 0 {
            return model;
        }
        let u = self.steps;
        for (f, row) in self.cells {
            let avg: Vec<f64> = row
                .iter()
                .map(|c| (c.total + c.weight * (u - c.stamp) as f64) / u as f64)
                .collect();
            if avg.iter().any(|w| *w != 0.0) {
                model.weights.insert(f, avg);
            }
        }
        model
    }
}

/// Per-epoch training record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrainingLog {
    /// Number of perceptron updates made in each epoch.
    pub updates_per_epoch: Vec<usize>,
    /// Gold mentions no oracle sequence reaches, summed over the corpus.
    pub unreachable_mentions: usize,
}

/// Trains an averaged perceptron on oracle action sequences.
pub fn train(corpus: &[AnnotatedSentence], epochs: usize, seed: u64) -> Result<PerceptronModel> {
    train_with_log(corpus, epochs, seed).map(|(m, _)| m)
}

pub fn train_with_log(
    corpus: &[AnnotatedSentence],
    epochs: usize,
    seed: u64,
) -> Result<(PerceptronModel, TrainingLog)> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    if epochs == 0 {
        return Err(Error::Config("epochs must be at least 1".into()));
    }
    let categories: Vec<String> = corpus
        .iter()
        .flat_map(|a| a.mentions.iter().map(|m| m.category().to_string()))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let inventory = action_inventory(&categories);

    // Oracle paths are fixed, so their features are extracted once.
    let mut unreachable_mentions = 0;
    let paths: Vec<Vec<(FeatureVector, Vec<usize>, usize)>> = corpus
        .iter()
        .map(|annotated| {
            let result = oracle(annotated);
            unreachable_mentions += result.unreachable.len();
            let mut state = ParserState::new(annotated.sentence.len());
            let mut steps = Vec::with_capacity(result.actions.len());
            for action in &result.actions {
                let candidates: Vec<usize> = candidate_actions(&state, &categories)
                    .iter()
                    .map(|c| inventory.iter().position(|a| a == c).unwrap())
                    .collect();
                let gold = inventory.iter().position(|a| a == action).unwrap();
                steps.push((
                    extract_features(&state, &annotated.sentence),
                    candidates,
                    gold,
                ));
                state = state.apply(action).expect("oracle actions are legal");
            }
            steps
        })
        .collect();

    let mut trainer = Trainer {
        width: inventory.len(),
        cells: FnvHashMap::default(),
        steps: 0,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..corpus.len()).collect();
    let mut updates_per_epoch = Vec::with_capacity(epochs);
    for _ in 0..epochs {
        order.shuffle(&mut rng);
        let mut updates = 0;
        for &i in &order {
            for (fv, candidates, gold) in &paths[i] {
                trainer.steps += 1;
                let scores: Vec<f64> = candidates.iter().map(|&c| trainer.dot(fv, c)).collect();
                let best = argmax(&scores, |_| true).expect("candidates are never empty");
                let predicted = candidates[best];
                if predicted != *gold {
                    trainer.update(fv, *gold, predicted);
                    updates += 1;
                }
            }
        }
        updates_per_epoch.push(updates);
    }
    log::info!(
        "trained {} epochs, {} updates over {} steps",
        epochs,
        updates_per_epoch.iter().sum::<usize>(),
        trainer.steps
    );
    Ok((
        trainer.averaged(categories),
        TrainingLog {
            updates_per_epoch,
            unreachable_mentions,
        },
    ))
}
