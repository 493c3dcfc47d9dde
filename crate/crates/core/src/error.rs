use std::fmt;

/// Errors raised by the logic, model and learning layers.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("formula has variables but the universe is empty")]
    VariableInGroundContext,

    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("base too large: {size} atoms to enumerate, limit is {limit}")]
    BaseTooLarge { size: usize, limit: usize },

    #[error("subbase mismatch: {0}")]
    SubbaseMismatch(String),

    #[error("theory is not Horn")]
    NotHorn,

    #[error("theory is inconsistent")]
    Inconsistent,

    #[error("degenerate example: {0}")]
    Degenerate(String),

    #[error("hypothesis is not DNF+")]
    NotDnfPlus,

    #[error("incomplete deduction: {0}")]
    IncompleteDeduction(String),

    #[error("possibilities example has no items")]
    EmptyPossibilities,

    #[error("theory is unsatisfiable on its base")]
    Unsatisfiable,

    #[error("hypothesis space too large: more than {limit} hypotheses")]
    SpaceTooLarge { limit: usize },

    #[error("weights missing")]
    MissingWeights,

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("possibility {index} does not have exactly one model")]
    NotSingleModel { index: usize },

    #[error("malformed relations: {0}")]
    MalformedRelations(String),

    #[error("setting mismatch: {0}")]
    SettingMismatch(String),
}

impl Error {
    pub(crate) fn signature(msg: impl fmt::Display) -> Self {
        Error::SignatureMismatch(msg.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
