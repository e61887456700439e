use thiserror::Error;

use crate::repcat::ObjectWord;

/// Every failure the engine can report.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch in {context}: {left:?} vs {right:?}")]
    ShapeMismatch {
        context: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),
    #[error("invalid group element index {0}")]
    InvalidElement(usize),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("word mismatch in {context}: expected {expected}, found {found}")]
    WordMismatch {
        context: &'static str,
        expected: ObjectWord,
        found: ObjectWord,
    },
    #[error("not an endomorphism: {dom} -> {cod}")]
    NotEndomorphism { dom: ObjectWord, cod: ObjectWord },
    #[error("data corruption: {0}")]
    DataCorruption(String),
    #[error("absolute simplicity violated: dim Hom({dom}, {cod}) = {dim}, expected 1")]
    AbsoluteSimplicity {
        dom: ObjectWord,
        cod: ObjectWord,
        dim: usize,
    },
    #[error("morphism is not a multiple of the identity: {0}")]
    NotScalar(String),
    #[error("indicator value {0} is not close to +1 or -1")]
    IndicatorOutOfRange(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolation(String),
    #[error("internal contradiction: {0}")]
    InternalContradiction(String),
    #[error("braid word realizes order {achieved:?}, required {required:?}")]
    BraidWord {
        achieved: Vec<usize>,
        required: Vec<usize>,
    },
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("unknown zoo entry `{0}`")]
    UnknownZooEntry(String),
    #[error("syntax error at {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("type error at {position}: upper leg expects {upper_dom}, lower leg produces {lower_cod}")]
    ComposeMismatch {
        position: usize,
        upper_dom: ObjectWord,
        lower_cod: ObjectWord,
    },
    #[error("unbound name `{name}` at {position}")]
    Unbound { position: usize, name: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
