use std::collections::HashSet;

use super::action::{Action, ActionKind};
use super::state::ParserState;
use crate::corpus::{Mention, Sentence};

/// Category used for `COMPLETE` when a scorer knows no categories.
pub const DEFAULT_CATEGORY: &str = "ENTITY";

/// Scores candidate actions for a parser state.
///
/// Implementations must be read-only during decoding so that sentences can
/// be decoded in parallel against one scorer.
pub trait ActionScorer {
    /// Categories for which a `COMPLETE` candidate is generated.
    fn categories(&self) -> &[String];

    /// One score per candidate, in candidate order.
    fn score(&self, state: &ParserState, sentence: &Sentence, candidates: &[Action]) -> Vec<f64>;
}

/// Legal actions of a non-terminal state, expanded over `categories`, in
/// tie-break order.
pub fn candidate_actions(state: &ParserState, categories: &[String]) -> Vec<Action> {
    let Ok(kinds) = state.valid_actions() else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for kind in kinds {
        if kind == ActionKind::Complete {
            if categories.is_empty() {
                out.push(Action::Complete(DEFAULT_CATEGORY.to_string()));
            } else {
                out.extend(categories.iter().map(|c| Action::Complete(c.clone())));
            }
        } else {
            out.push(Action::from_kind(kind, ""));
        }
    }
    out
}

/// Index of the best score; the earliest candidate wins ties.
pub(crate) fn argmax(scores: &[f64], allowed: impl Fn(usize) -> bool) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, &s) in scores.iter().enumerate() {
        if !allowed(i) {
            continue;
        }
        let s = if s.is_nan() { f64::NEG_INFINITY } else { s };
        match best {
            Some((_, b)) if s <= b => {}
            _ => best = Some((i, s)),
        }
    }
    best.map(|(i, _)| i)
}

/// Greedy decoding under hard constraints.
///
/// At each state the highest-scoring legal action is applied. Successors
/// whose configuration was already visited are skipped, and duplicate
/// mentions are emitted once, so the loop always halts.
pub fn decode(sentence: &Sentence, scorer: &dyn ActionScorer) -> (Vec<Mention>, Vec<Action>) {
    let mut state = ParserState::new(sentence.len());
    let mut visited = HashSet::new();
    visited.insert(state.configuration());
    while !state.is_terminal() {
        let candidates = candidate_actions(&state, scorer.categories());
        let scores = scorer.score(&state, sentence, &candidates);
        let successors: Vec<ParserState> = candidates
            .iter()
            .map(|a| state.apply(a).expect("candidates are legal"))
            .collect();
        let fresh = |i: usize| !visited.contains(&successors[i].configuration());
        let pick = argmax(&scores, fresh)
            .or_else(|| argmax(&scores, |_| true))
            .expect("non-terminal states have legal actions");
        state = successors.into_iter().nth(pick).unwrap();
        visited.insert(state.configuration());
    }
    (state.output, state.history)
}

/// Replays a fixed action sequence; used to check oracle round trips.
pub struct SequenceScorer {
    actions: Vec<Action>,
    categories: Vec<String>,
}

impl SequenceScorer {
    pub fn new(actions: Vec<Action>) -> Self {
        let mut categories: Vec<String> = actions
            .iter()
            .filter_map(|a| a.category().map(str::to_string))
            .collect();
        categories.sort();
        categories.dedup();
        SequenceScorer {
            actions,
            categories,
        }
    }
}

impl ActionScorer for SequenceScorer {
    fn categories(&self) -> &[String] {
        &self.categories
    }

    fn score(&self, state: &ParserState, _: &Sentence, candidates: &[Action]) -> Vec<f64> {
        let next = self.actions.get(state.history.len());
        candidates
            .iter()
            .map(|a| if Some(a) == next { 1.0 } else { 0.0 })
            .collect()
    }
}

/// Same score for every candidate, so the tie-break order decides.
pub struct UniformScorer {
    pub categories: Vec<String>,
}

impl ActionScorer for UniformScorer {
    fn categories(&self) -> &[String] {
        &self.categories
    }

    fn score(&self, _: &ParserState, _: &Sentence, candidates: &[Action]) -> Vec<f64> {
        vec![0.0; candidates.len()]
    }
}
