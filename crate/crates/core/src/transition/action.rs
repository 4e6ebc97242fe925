use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// The six transition kinds.
///
/// The derived ordering is the tie-break order used when scores are equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ActionKind {
    Out,
    Shift,
    Complete,
    Reduce,
    LeftReduce,
    RightReduce,
}

impl ActionKind {
    pub const ALL: [ActionKind; 6] = [
        ActionKind::Out,
        ActionKind::Shift,
        ActionKind::Complete,
        ActionKind::Reduce,
        ActionKind::LeftReduce,
        ActionKind::RightReduce,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ActionKind::Out => "OUT",
            ActionKind::Shift => "SHIFT",
            ActionKind::Complete => "COMPLETE",
            ActionKind::Reduce => "REDUCE",
            ActionKind::LeftReduce => "LEFT-REDUCE",
            ActionKind::RightReduce => "RIGHT-REDUCE",
        }
    }

    pub fn is_reduce(self) -> bool {
        matches!(
            self,
            ActionKind::Reduce | ActionKind::LeftReduce | ActionKind::RightReduce
        )
    }
}

impl fmt::Display for ActionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A transition. `Complete` carries the category of the emitted mention.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Action {
    Out,
    Shift,
    Complete(String),
    Reduce,
    LeftReduce,
    RightReduce,
}

impl Action {
    pub fn kind(&self) -> ActionKind {
        match self {
            Action::Out => ActionKind::Out,
            Action::Shift => ActionKind::Shift,
            Action::Complete(_) => ActionKind::Complete,
            Action::Reduce => ActionKind::Reduce,
            Action::LeftReduce => ActionKind::LeftReduce,
            Action::RightReduce => ActionKind::RightReduce,
        }
    }

    pub fn category(&self) -> Option<&str> {
        match self {
            Action::Complete(c) => Some(c),
            _ => None,
        }
    }

    /// Builds the action for `kind`; `category` is used only for `Complete`.
    pub fn from_kind(kind: ActionKind, category: &str) -> Action {
        match kind {
            ActionKind::Out => Action::Out,
            ActionKind::Shift => Action::Shift,
            ActionKind::Complete => Action::Complete(category.to_string()),
            ActionKind::Reduce => Action::Reduce,
            ActionKind::LeftReduce => Action::LeftReduce,
            ActionKind::RightReduce => Action::RightReduce,
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Complete(c) => write!(f, "COMPLETE:{c}"),
            other => f.write_str(other.kind().name()),
        }
    }
}

impl FromStr for Action {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some(category) = s.strip_prefix("COMPLETE:") {
            if category.is_empty() || category.chars().any(char::is_whitespace) {
                return Err(Error::UnknownAction(s.to_string()));
            }
            return Ok(Action::Complete(category.to_string()));
        }
        match s {
            "OUT" => Ok(Action::Out),
            "SHIFT" => Ok(Action::Shift),
            "REDUCE" => Ok(Action::Reduce),
            "LEFT-REDUCE" => Ok(Action::LeftReduce),
            "RIGHT-REDUCE" => Ok(Action::RightReduce),
            _ => Err(Error::UnknownAction(s.to_string())),
        }
    }
}

/// One action per line.
pub fn write_trace(actions: &[Action]) -> String {
    let mut out = String::new();
    for a in actions {
        out.push_str(&a.to_string());
        out.push('\n');
    }
    out
}

pub fn parse_trace(text: &str) -> Result<Vec<Action>, Error> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(str::parse)
        .collect()
}
