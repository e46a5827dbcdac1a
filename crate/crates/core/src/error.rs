use thiserror::Error;

use crate::report::Report;

/// Structural problems with a model description: unknown names, missing
/// maps, malformed files. These are input errors, not law violations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("invalid name `{0}`")]
    BadName(String),
    #[error("duplicate {0} name")]
    Duplicate(String),
    #[error("{count} atoms exceeds the cap of {cap} (set AWAREKIT_MAX_ATOMS to raise it)")]
    TooManyAtoms { count: usize, cap: usize },
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("unknown space `{0}`")]
    UnknownSpace(String),
    #[error("space key `{0}` splits into atoms in more than one way")]
    AmbiguousSpaceKey(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("missing {0}")]
    Missing(String),
    #[error("state space `{0}` is empty")]
    EmptySpace(String),
    #[error("projection `{0}` is not a covering pair")]
    NotCovering(String),
    #[error("map `{0}` is not total")]
    IncompleteMap(String),
    #[error("{0} has an empty image")]
    EmptyImage(String),
    #[error("space `{space}` is not below the space of state `{state}`")]
    NotComparable { state: String, space: String },
    #[error("set for {0} straddles several state spaces")]
    StraddlesSpaces(String),
    #[error("formula uses atoms outside the model language: {0}")]
    UndefinedFormula(String),
    #[error("no agents given")]
    NoAgents,
    #[error("malformed model: {0}")]
    Malformed(String),
    #[error("{0}")]
    Io(String),
}

/// Parse failure with the byte offset where it was detected.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("syntax error at byte {offset}: {message}")]
pub struct SyntaxError {
    pub offset: usize,
    pub message: String,
}

impl SyntaxError {
    pub fn new(offset: usize, message: impl Into<String>) -> Self {
        SyntaxError {
            offset,
            message: message.into(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("precondition failed: model does not validate ({} violations)", .0.len())]
    PreconditionFailed(Report),
    #[error("candidate implicit correspondence is invalid ({} violations)", .0.len())]
    CandidateInvalid(Report),
    #[error("derived explicit correspondence is inconsistent ({} violations)", .0.len())]
    DerivationInconsistent(Report),
    #[error("{stage} output breaks its invariants ({} violations)", .report.len())]
    TransformInvariantBroken { stage: &'static str, report: Report },
    #[error("invalid generator caps: {0}")]
    InvalidCaps(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
