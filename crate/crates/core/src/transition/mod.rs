//! Transition system for discontinuous mention recognition.

mod action;
mod decode;
mod oracle;
mod state;

pub use action::{parse_trace, write_trace, Action, ActionKind};
pub(crate) use decode::argmax;
pub use decode::{
    candidate_actions, decode, ActionScorer, SequenceScorer, UniformScorer, DEFAULT_CATEGORY,
};
pub use oracle::{oracle, reference_oracle, OracleResult, REFERENCE_MAX_LEN};
pub use state::{ParserState, StackSpan, Violation};
