use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("graph is not connected")]
    NotConnected,

    #[error("vertex {0} has degree zero")]
    DegreeZero(usize),

    #[error("matrix is not symmetric: |m[{row}][{col}] - m[{col}][{row}]| exceeds tolerance")]
    NotSymmetric { row: usize, col: usize },

    #[error("inconsistent spectrum: {0}")]
    InconsistentSpectrum(String),

    #[error("internal assertion failed: {0}")]
    InternalAssertion(String),

    #[error("size cap exceeded: {what} {requested} > {cap}")]
    SizeCapExceeded {
        what: &'static str,
        requested: String,
        cap: usize,
    },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn assertion(msg: impl Into<String>) -> Self {
        Error::InternalAssertion(msg.into())
    }

    pub(crate) fn inconsistent(msg: impl Into<String>) -> Self {
        Error::InconsistentSpectrum(msg.into())
    }
}
