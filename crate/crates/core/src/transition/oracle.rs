//! Derivation of gold action sequences from gold mentions.
//!
//! [`oracle`] is a deterministic rule-based oracle used for training.
//! [`reference_oracle`] is an exhaustive breadth-first search, feasible only
//! on short sentences, that the rule oracle is checked against.

use std::collections::{HashMap, VecDeque};

use super::action::Action;
use super::decode::DEFAULT_CATEGORY;
use super::state::{ParserState, StackSpan};
use crate::corpus::{AnnotatedSentence, Mention};
use crate::error::{Error, Result};

pub const REFERENCE_MAX_LEN: usize = 12;
const REFERENCE_NODE_BUDGET: usize = 4_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub actions: Vec<Action>,
    /// Gold mentions emitted by `actions`.
    pub reachable: Vec<Mention>,
    /// Gold mentions no action sequence of this oracle can emit.
    pub unreachable: Vec<Mention>,
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.len() <= b.len() && a.iter().all(|x| b.binary_search(x).is_ok())
}

fn union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut u = [a, b].concat();
    u.sort_unstable();
    u
}

/// Rule-based oracle.
///
/// At each state the first applicable rule fires:
///
/// 1. `COMPLETE` when the top span equals a pending gold mention that no
///    other pending mention strictly contains.
/// 2. A reduce when the union of the top two spans lies inside a pending
///    mention: `LEFT-REDUCE` if `s1` is still needed by another pending
///    mention, `RIGHT-REDUCE` if `s0` is, plain `REDUCE` otherwise. The
///    reduce is postponed while `s0` is needed by a pending mention that
///    excludes `s1` and still waits for buffer tokens.
/// 3. `SHIFT` when the next token belongs to a pending mention, else `OUT`.
///
/// Mentions that end up unemitted are declared unreachable and the pass is
/// repeated without them, so the returned actions emit exactly `reachable`.
pub fn oracle(annotated: &AnnotatedSentence) -> OracleResult {
    let gold = &annotated.mentions;
    let n = annotated.sentence.len();
    let mut targets: Vec<Mention> = gold.clone();
    loop {
        let (actions, output) = greedy_pass(n, &targets);
        let junk = output.iter().any(|m| !gold.contains(m));
        let emitted: Vec<Mention> = targets
            .iter()
            .filter(|t| output.contains(t))
            .cloned()
            .collect();
        if !junk && emitted.len() == targets.len() {
            let unreachable = gold
                .iter()
                .filter(|g| !targets.contains(g))
                .cloned()
                .collect();
            return OracleResult {
                actions,
                reachable: targets,
                unreachable,
            };
        }
        if emitted.len() < targets.len() {
            targets = emitted;
            continue;
        }
        // Every target was emitted but a leftover span was flushed as a
        // spurious mention; drop the target whose removal leaves the most.
        let mut best: Option<Vec<Mention>> = None;
        for skip in 0..targets.len() {
            let reduced: Vec<Mention> = targets
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, m)| m.clone())
                .collect();
            let (_, out) = greedy_pass(n, &reduced);
            if out.iter().any(|m| !gold.contains(m)) {
                continue;
            }
            let kept: Vec<Mention> = reduced.into_iter().filter(|t| out.contains(t)).collect();
            if best.as_ref().is_none_or(|b| kept.len() > b.len()) {
                best = Some(kept);
            }
        }
        targets = best.unwrap_or_else(|| targets[1..].to_vec());
    }
}

fn greedy_pass(n: usize, targets: &[Mention]) -> (Vec<Action>, Vec<Mention>) {
    let mut state = ParserState::new(n);
    let mut emitted = vec![false; targets.len()];
    while !state.is_terminal() {
        let action = next_action(&state, targets, &emitted);
        if let Action::Complete(category) = &action {
            let top = &state.stack.last().unwrap().positions;
            if let Some(i) = (0..targets.len()).find(|&i| {
                !emitted[i] && targets[i].positions() == top && targets[i].category() == category
            }) {
                emitted[i] = true;
            }
        }
        state = state.apply(&action).expect("oracle proposes legal actions");
    }
    (state.history, state.output)
}

fn next_action(state: &ParserState, targets: &[Mention], emitted: &[bool]) -> Action {
    let pending: Vec<&Mention> = targets
        .iter()
        .zip(emitted)
        .filter(|(_, &e)| !e)
        .map(|(m, _)| m)
        .collect();

    if let Some(s0) = state.stack_span(0) {
        let top = s0.positions.as_slice();
        let completes = pending.iter().find(|g| {
            g.positions() == top
                && !pending
                    .iter()
                    .any(|h| h.len() > top.len() && is_subset(top, h.positions()))
        });
        if let Some(g) = completes {
            return Action::Complete(g.category().to_string());
        }

        if let Some(s1) = state.stack_span(1) {
            if s0.is_disjoint(s1) {
                if let Some(action) = reduce_rule(state, s0, s1, &pending) {
                    return action;
                }
            }
        }
    }

    if !state.buffer_is_empty() {
        let next = state.buffer_index;
        return if pending.iter().any(|g| g.contains(next)) {
            Action::Shift
        } else {
            Action::Out
        };
    }

    // Buffer exhausted with a leftover span: flush it.
    let top = &state.stack.last().expect("non-terminal").positions;
    let category = targets
        .iter()
        .find(|t| t.positions() == top.as_slice())
        .or(pending.first().copied())
        .map_or(DEFAULT_CATEGORY, |m| m.category());
    Action::Complete(category.to_string())
}

fn reduce_rule(
    state: &ParserState,
    s0: &StackSpan,
    s1: &StackSpan,
    pending: &[&Mention],
) -> Option<Action> {
    let u = union(&s0.positions, &s1.positions);
    if !pending.iter().any(|g| is_subset(&u, g.positions())) {
        return None;
    }
    let needed_elsewhere = |s: &[usize]| {
        pending
            .iter()
            .any(|h| is_subset(s, h.positions()) && !is_subset(&u, h.positions()))
    };
    let waits_for_buffer = pending.iter().any(|h| {
        is_subset(&s0.positions, h.positions())
            && !is_subset(&u, h.positions())
            && h.last() >= state.buffer_index
    });
    if waits_for_buffer && !state.buffer_is_empty() {
        return None;
    }
    Some(if needed_elsewhere(&s1.positions) {
        Action::LeftReduce
    } else if needed_elsewhere(&s0.positions) {
        Action::RightReduce
    } else {
        Action::Reduce
    })
}

type SearchKey = (Vec<Vec<usize>>, usize, u128);

struct Node {
    stack: Vec<Vec<usize>>,
    buffer: usize,
    emitted: u128,
    parent: usize,
    action: Option<Action>,
}

/// Exhaustive breadth-first oracle.
///
/// Maximizes the number of gold mentions emitted; ties go to the fewest
/// actions, then the lexicographically smallest sequence under the action
/// tie-break order. Refuses sentences longer than `max_len`.
pub fn reference_oracle(annotated: &AnnotatedSentence, max_len: usize) -> Result<OracleResult> {
    let n = annotated.sentence.len();
    if n > max_len {
        return Err(Error::SizeLimit {
            len: n,
            max: max_len,
        });
    }
    let gold = &annotated.mentions;
    if gold.len() > 128 {
        return Err(Error::SizeLimit {
            len: gold.len(),
            max: 128,
        });
    }
    let in_gold: Vec<bool> = (0..n).map(|p| gold.iter().any(|g| g.contains(p))).collect();
    let junk_category = gold
        .first()
        .map_or(DEFAULT_CATEGORY, |g| g.category())
        .to_string();

    let mut nodes = vec![Node {
        stack: Vec::new(),
        buffer: 0,
        emitted: 0,
        parent: usize::MAX,
        action: None,
    }];
    let mut seen: HashMap<SearchKey, ()> = HashMap::new();
    seen.insert((Vec::new(), 0, 0), ());
    let mut queue = VecDeque::from([0usize]);
    let mut best: Option<(u32, usize)> = None;

    while let Some(id) = queue.pop_front() {
        let (stack, buffer, emitted) = {
            let node = &nodes[id];
            (node.stack.clone(), node.buffer, node.emitted)
        };
        if stack.is_empty() && buffer == n {
            let score = emitted.count_ones();
            if best.is_none_or(|(b, _)| score > b) {
                best = Some((score, id));
            }
            continue;
        }

        let mut successors: Vec<(Action, Vec<Vec<usize>>, usize, u128)> = Vec::new();
        if buffer < n {
            successors.push((Action::Out, stack.clone(), buffer + 1, emitted));
            if in_gold[buffer] {
                let mut s = stack.clone();
                s.push(vec![buffer]);
                successors.push((Action::Shift, s, buffer + 1, emitted));
            }
        }
        if let Some(top) = stack.last() {
            let mut rest = stack.clone();
            rest.pop();
            let mut matches: Vec<(usize, &str)> = gold
                .iter()
                .enumerate()
                .filter(|(_, g)| g.positions() == top.as_slice())
                .map(|(i, g)| (i, g.category()))
                .collect();
            matches.sort_by(|a, b| a.1.cmp(b.1));
            if matches.is_empty() {
                successors.push((
                    Action::Complete(junk_category.clone()),
                    rest,
                    buffer,
                    emitted,
                ));
            } else {
                for (i, category) in matches {
                    successors.push((
                        Action::Complete(category.to_string()),
                        rest.clone(),
                        buffer,
                        emitted | (1u128 << i),
                    ));
                }
            }
        }
        if stack.len() >= 2 {
            let s0 = &stack[stack.len() - 1];
            let s1 = &stack[stack.len() - 2];
            if s0.iter().all(|p| s1.binary_search(p).is_err()) {
                let u = union(s0, s1);
                let base = &stack[..stack.len() - 2];
                for (action, kept) in [
                    (Action::Reduce, None),
                    (Action::LeftReduce, Some(s1)),
                    (Action::RightReduce, Some(s0)),
                ] {
                    let mut s = base.to_vec();
                    if let Some(k) = kept {
                        s.push(k.clone());
                    }
                    s.push(u.clone());
                    successors.push((action, s, buffer, emitted));
                }
            }
        }

        for (action, stack, buffer, emitted) in successors {
            let key = (stack, buffer, emitted);
            if seen.contains_key(&key) {
                continue;
            }
            let (stack, buffer, emitted) = key.clone();
            seen.insert(key, ());
            nodes.push(Node {
                stack,
                buffer,
                emitted,
                parent: id,
                action: Some(action),
            });
            queue.push_back(nodes.len() - 1);
            if nodes.len() > REFERENCE_NODE_BUDGET {
                return Err(Error::SizeLimit {
                    len: n,
                    max: max_len,
                });
            }
        }
    }

    let (_, mut id) = best.expect("the all-OUT sequence always terminates");
    let mut actions = Vec::new();
    while let Some(action) = nodes[id].action.take() {
        actions.push(action);
        id = nodes[id].parent;
    }
    actions.reverse();
    let state = ParserState::run(n, &actions).expect("search only expands legal actions");
    let (reachable, unreachable) = gold.iter().cloned().partition(|g| state.output.contains(g));
    Ok(OracleResult {
        actions,
        reachable,
        unreachable,
    })
}
