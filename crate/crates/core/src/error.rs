use std::fmt;

use crate::objects::ObjectClass;

/// Errors produced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid {kind}: {detail}")]
    InvalidObject { kind: &'static str, detail: String },

    #[error("unknown statistic `{0}`")]
    UnknownStatistic(String),

    #[error("statistic `{stat}` is not defined on {class} objects")]
    StatisticNotApplicable { stat: String, class: ObjectClass },

    #[error("n = {n} exceeds the {what} bound of {bound}")]
    BoundExceeded { what: String, n: usize, bound: usize },

    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{line}:{column}: letter `{letter}` is not in the alphabet")]
    UnknownLetter { letter: String, line: usize, column: usize },

    #[error("letter `{0}` is not in the grammar's alphabet")]
    AlphabetMismatch(String),

    #[error("invalid letter name `{0}`")]
    InvalidLetter(String),

    #[error("series order mismatch: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("residual letters differ within profile group {group:?}")]
    NonuniformProfile { group: Vec<u32> },

    #[error("identity violated: {0}")]
    IdentityViolation(String),

    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Source position used by the rule-file parser.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}
