//! Error type shared across the pipeline.

use std::io;

/// Errors produced by parsing, modeling and evaluation.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),

    /// Malformed text input; `line` is 1-based within the offending stream.
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A configuration value violates its invariant.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Word lookup failed under the strict OOV policy.
    #[error("word not found: {0}")]
    MissingWord(String),

    /// The verb is not part of the model vocabulary.
    #[error("unknown verb: {0}")]
    UnknownVerb(String),

    /// Pair data references a lemma outside the vocabulary.
    #[error("lemma not in vocabulary: {0}")]
    VocabMismatch(String),

    /// The count table holds no pairs for the queried role.
    #[error("empty count table for role {0}")]
    EmptyModel(&'static str),

    /// Two sparse vectors are indexed by different noun spaces.
    #[error("mismatched noun spaces")]
    SpaceMismatch,

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("need at least 2 items, got {0}")]
    TooFewItems(usize),

    /// A rank correlation over a constant list is undefined.
    #[error("undefined correlation: input list is constant")]
    ConstantInput,

    #[error("non-finite value in correlation input")]
    NonFiniteInput,

    /// Every dataset row was dropped before scoring.
    #[error("no usable rows after OOV handling")]
    NoUsableRows,
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
