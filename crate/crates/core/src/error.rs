use std::fmt;

use thiserror::Error;

use crate::model::{ActionKind, ActionName};

/// One structural problem found while validating a component description.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// The action is declared in more than one alphabet class.
    AlphabetOverlap(ActionName),
    /// A transition or the initial declaration refers to an undeclared state.
    UnknownState(String),
    /// A transition is labeled with an action missing from the alphabet.
    UnknownAction(ActionName),
    MissingInitial,
    /// Not a valid action or state token.
    InvalidName(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::AlphabetOverlap(a) => write!(f, "action `{a}` declared in more than one class"),
            Violation::UnknownState(s) => write!(f, "unknown state `{s}`"),
            Violation::UnknownAction(a) => write!(f, "action `{a}` is not in the alphabet"),
            Violation::MissingInitial => write!(f, "no initial state declared"),
            Violation::InvalidName(n) => write!(f, "invalid name `{n}`"),
        }
    }
}

/// An action shared by two components with incompatible types.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conflict {
    pub action: ActionName,
    pub left: ActionKind,
    pub right: ActionKind,
}

impl fmt::Display for Conflict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{}` ({} in left, {} in right)", self.action, self.left, self.right)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: syntax error: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: `{action}` used as {used} but declared as {declared}")]
    KindMismatch {
        line: usize,
        action: String,
        declared: ActionKind,
        used: ActionKind,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid component `{component}`: {}", join(.violations))]
    Invalid {
        component: String,
        violations: Vec<Violation>,
    },
    #[error("components are not composable: {}", join(.0))]
    NotComposable(Vec<Conflict>),
    #[error("decorated action names already in use: {}", join(.0))]
    DecorationClash(Vec<ActionName>),
    #[error("`{0}` is not an output action")]
    NotAnOutput(ActionName),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("queue bound must be at least 1, got {0}")]
    BoundTooSmall(usize),
    #[error("state space exceeds the limit of {0} nodes")]
    StateLimitExceeded(usize),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl Error {
    /// Short machine-readable name of the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Invalid { .. } => "Invalid",
            Error::NotComposable(_) => "NotComposable",
            Error::DecorationClash(_) => "DecorationClash",
            Error::NotAnOutput(_) => "NotAnOutput",
            Error::UnknownState(_) => "UnknownState",
            Error::BoundTooSmall(_) => "BoundTooSmall",
            Error::StateLimitExceeded(_) => "StateLimitExceeded",
            Error::Parse(ParseError::Syntax { .. }) => "SyntaxError",
            Error::Parse(ParseError::KindMismatch { .. }) => "KindMismatch",
        }
    }
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(", ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
