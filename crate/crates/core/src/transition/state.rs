use thiserror::Error;

use super::action::{Action, ActionKind};
use crate::corpus::{format_runs, Mention};

/// Why an action cannot be applied to a state.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("the state is terminal")]
    TerminalState,
    #[error("{0} needs a non-empty buffer")]
    BufferEmpty(ActionKind),
    #[error("COMPLETE needs a non-empty stack")]
    CompleteNeedsSpan,
    #[error("{0} needs two spans on the stack")]
    ReduceNeedsTwoSpans(ActionKind),
    #[error("{0} cannot merge overlapping spans")]
    OverlappingSpans(ActionKind),
}

/// A partially built mention on the stack. Positions may already contain gaps.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StackSpan {
    pub positions: Vec<usize>,
    /// Reduce actions that built this span, oldest first.
    pub origin: Vec<ActionKind>,
}

impl StackSpan {
    pub fn token(position: usize) -> Self {
        StackSpan {
            positions: vec![position],
            origin: Vec::new(),
        }
    }

    pub fn first(&self) -> usize {
        self.positions[0]
    }

    pub fn last(&self) -> usize {
        *self.positions.last().unwrap()
    }

    pub fn is_discontinuous(&self) -> bool {
        self.last() - self.first() + 1 != self.positions.len()
    }

    pub fn is_disjoint(&self, other: &StackSpan) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.positions.len() && j < other.positions.len() {
            match self.positions[i].cmp(&other.positions[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    fn union(lower: &StackSpan, upper: &StackSpan, via: ActionKind) -> StackSpan {
        let mut positions = Vec::with_capacity(lower.positions.len() + upper.positions.len());
        positions.extend_from_slice(&lower.positions);
        positions.extend_from_slice(&upper.positions);
        positions.sort_unstable();
        let mut origin = lower.origin.clone();
        origin.extend_from_slice(&upper.origin);
        origin.push(via);
        StackSpan { positions, origin }
    }
}

impl std::fmt::Display for StackSpan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}]", format_runs(&self.positions))
    }
}

/// Parser configuration: stack of spans, buffer cursor, history and output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParserState {
    /// Top of the stack is the last element.
    pub stack: Vec<StackSpan>,
    pub buffer_index: usize,
    pub history: Vec<Action>,
    pub output: Vec<Mention>,
    pub sentence_length: usize,
}

impl ParserState {
    pub fn new(sentence_length: usize) -> Self {
        ParserState {
            stack: Vec::new(),
            buffer_index: 0,
            history: Vec::new(),
            output: Vec::new(),
            sentence_length,
        }
    }

    pub fn is_terminal(&self) -> bool {
        self.stack.is_empty() && self.buffer_is_empty()
    }

    pub fn buffer_is_empty(&self) -> bool {
        self.buffer_index >= self.sentence_length
    }

    /// `s0`, `s1`, ... counted from the top.
    pub fn stack_span(&self, depth: usize) -> Option<&StackSpan> {
        self.stack
            .len()
            .checked_sub(depth + 1)
            .map(|i| &self.stack[i])
    }

    /// Stack contents and buffer position; two states with the same
    /// configuration behave identically from here on.
    pub fn configuration(&self) -> (Vec<Vec<usize>>, usize) {
        (
            self.stack.iter().map(|s| s.positions.clone()).collect(),
            self.buffer_index,
        )
    }

    fn reduce_check(&self, kind: ActionKind) -> Result<(), Violation> {
        match (self.stack_span(0), self.stack_span(1)) {
            (Some(s0), Some(s1)) => {
                if s0.is_disjoint(s1) {
                    Ok(())
                } else {
                    Err(Violation::OverlappingSpans(kind))
                }
            }
            _ => Err(Violation::ReduceNeedsTwoSpans(kind)),
        }
    }

    /// Checks a single action kind against the state.
    pub fn check(&self, kind: ActionKind) -> Result<(), Violation> {
        if self.is_terminal() {
            return Err(Violation::TerminalState);
        }
        match kind {
            ActionKind::Shift | ActionKind::Out => {
                if self.buffer_is_empty() {
                    Err(Violation::BufferEmpty(kind))
                } else {
                    Ok(())
                }
            }
            ActionKind::Complete => {
                if self.stack.is_empty() {
                    Err(Violation::CompleteNeedsSpan)
                } else {
                    Ok(())
                }
            }
            ActionKind::Reduce | ActionKind::LeftReduce | ActionKind::RightReduce => {
                self.reduce_check(kind)
            }
        }
    }

    /// Legal action kinds in tie-break order. Never empty for a non-terminal state.
    pub fn valid_actions(&self) -> Result<Vec<ActionKind>, Violation> {
        if self.is_terminal() {
            return Err(Violation::TerminalState);
        }
        Ok(ActionKind::ALL
            .into_iter()
            .filter(|&k| self.check(k).is_ok())
            .collect())
    }

    /// Returns the successor state; `self` is left untouched.
    pub fn apply(&self, action: &Action) -> Result<ParserState, Violation> {
        let kind = action.kind();
        self.check(kind)?;
        let mut next = self.clone();
        match action {
            Action::Shift => {
                next.stack.push(StackSpan::token(next.buffer_index));
                next.buffer_index += 1;
            }
            Action::Out => next.buffer_index += 1,
            Action::Complete(category) => {
                let span = next.stack.pop().expect("checked");
                let mention = Mention::new(span.positions, category.clone())
                    .expect("stack spans are strictly increasing");
                if !next.output.contains(&mention) {
                    next.output.push(mention);
                }
            }
            Action::Reduce | Action::LeftReduce | Action::RightReduce => {
                let s0 = next.stack.pop().expect("checked");
                let s1 = next.stack.pop().expect("checked");
                let merged = StackSpan::union(&s1, &s0, kind);
                match action {
                    Action::LeftReduce => next.stack.push(s1),
                    Action::RightReduce => next.stack.push(s0),
                    _ => {}
                }
                next.stack.push(merged);
            }
        }
        next.history.push(action.clone());
        Ok(next)
    }

    /// Applies a sequence, stopping at the first violation.
    pub fn run<'a>(
        sentence_length: usize,
        actions: impl IntoIterator<Item = &'a Action>,
    ) -> Result<ParserState, Violation> {
        let mut state = ParserState::new(sentence_length);
        for a in actions {
            state = state.apply(a)?;
        }
        Ok(state)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ade() -> Action {
        Action::Complete("ADE".into())
    }

    #[test]
    fn empty_stack_allows_shift_and_out() {
        let s = ParserState::new(3);
        assert_eq!(
            s.valid_actions().unwrap(),
            vec![ActionKind::Out, ActionKind::Shift]
        );
    }

    #[test]
    fn single_span_empty_buffer_allows_complete() {
        let s = ParserState::run(1, &[Action::Shift]).unwrap();
        assert_eq!(s.valid_actions().unwrap(), vec![ActionKind::Complete]);
    }

    #[test]
    fn two_disjoint_spans_empty_buffer() {
        let s = ParserState::run(2, &[Action::Shift, Action::Shift]).unwrap();
        assert_eq!(
            s.valid_actions().unwrap(),
            vec![
                ActionKind::Complete,
                ActionKind::Reduce,
                ActionKind::LeftReduce,
                ActionKind::RightReduce
            ]
        );
    }

    #[test]
    fn overlapping_top_spans_cannot_reduce() {
        let s = ParserState::run(2, &[Action::Shift, Action::Shift, Action::LeftReduce]).unwrap();
        assert_eq!(s.stack.len(), 2);
        assert_eq!(s.valid_actions().unwrap(), vec![ActionKind::Complete]);
        assert_eq!(
            s.apply(&Action::Reduce),
            Err(Violation::OverlappingSpans(ActionKind::Reduce))
        );
    }

    #[test]
    fn terminal_state_has_no_actions() {
        let s = ParserState::run(1, &[Action::Out]).unwrap();
        assert!(s.is_terminal());
        assert!(s.output.is_empty());
        assert_eq!(s.valid_actions(), Err(Violation::TerminalState));
    }

    #[test]
    fn named_violations() {
        let s = ParserState::new(2);
        assert_eq!(s.apply(&ade()), Err(Violation::CompleteNeedsSpan));
        let one = s.apply(&Action::Shift).unwrap();
        assert_eq!(
            one.apply(&Action::Reduce),
            Err(Violation::ReduceNeedsTwoSpans(ActionKind::Reduce))
        );
        let done = ParserState::run(2, &[Action::Out, Action::Shift]).unwrap();
        assert_eq!(
            done.apply(&Action::Shift),
            Err(Violation::BufferEmpty(ActionKind::Shift))
        );
    }

    #[test]
    fn muscle_pain_and_fatigue() {
        let actions = [
            Action::Shift,
            Action::Shift,
            Action::LeftReduce,
            ade(),
            Action::Out,
            Action::Shift,
            Action::Reduce,
            ade(),
        ];
        let s = ParserState::run(4, &actions).unwrap();
        assert!(s.is_terminal());
        let expected = vec![
            Mention::new(vec![0, 1], "ADE").unwrap(),
            Mention::new(vec![0, 3], "ADE").unwrap(),
        ];
        assert_eq!(s.output, expected);
    }

    #[test]
    fn right_reduce_keeps_top_span_beneath_union() {
        let s = ParserState::run(2, &[Action::Shift, Action::Shift, Action::RightReduce]).unwrap();
        let tops: Vec<_> = s.stack.iter().map(|x| x.positions.clone()).collect();
        assert_eq!(tops, vec![vec![1], vec![0, 1]]);
        assert_eq!(s.stack[1].origin, vec![ActionKind::RightReduce]);
    }

    #[test]
    fn apply_is_pure() {
        let s = ParserState::run(3, &[Action::Shift, Action::Out]).unwrap();
        let before = s.clone();
        let a = s.apply(&Action::Shift).unwrap();
        let b = s.apply(&Action::Shift).unwrap();
        assert_eq!(s, before);
        assert_eq!(a, b);
    }

    #[test]
    fn duplicate_complete_emits_once() {
        let mut s = ParserState::run(2, &[Action::Shift, Action::Out]).unwrap();
        s.output.push(Mention::new(vec![0], "ADE").unwrap());
        let s = s.apply(&ade()).unwrap();
        assert!(s.is_terminal());
        assert_eq!(s.output.len(), 1);
    }
}
