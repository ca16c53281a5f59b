use thiserror::Error;

use crate::absorber::AbsorberPhase;
use crate::matcher::ConnectFailure;
use crate::pipeline::Phase;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("uniformity mismatch: expected {expected}, found {found}")]
    UniformityMismatch { expected: usize, found: usize },

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("not a permutation: {0}")]
    NotPermutation(String),

    #[error("template has no edges")]
    Edgeless,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("rooted matching incomplete: {} of {} requests unmatched", .0.unmatched.len(), .0.requested)]
    ConnectionFailed(Box<ConnectFailure>),

    #[error("factor search found {found} of {quota} copies")]
    FactorFailed { found: usize, quota: usize },

    #[error("window {window} contains no copy of the template")]
    WindowEmpty { window: usize },

    #[error("no perfect matching at cover step {step}")]
    CoverFailed { step: usize },

    #[error("absorber construction failed during {phase}: {source}")]
    AbsorberFailed {
        phase: AbsorberPhase,
        #[source]
        source: Box<Error>,
    },

    #[error("no verified cycle after {attempts} attempts; last failure during {phase}: {source}")]
    Exhausted {
        attempts: usize,
        phase: Phase,
        #[source]
        source: Box<Error>,
    },

    #[error("certificate rejected by verifier")]
    Unverified,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }
}
