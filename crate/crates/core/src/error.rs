use thiserror::Error;

/// Errors raised by the library. Every variant is recoverable by the caller.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("elements belong to different spaces: {0}")]
    CrossSpace(String),
    #[error("invalid interval ({lo}, {hi}): lower end must be strictly below upper end")]
    InvalidInterval { lo: String, hi: String },
    #[error("matrix is not symmetric at entry ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error(
        "generators {first} and {second} do not commute: commutator entry ({row}, {col}) is {value}"
    )]
    NonCommuting {
        first: usize,
        second: usize,
        row: usize,
        col: usize,
        value: String,
    },
    #[error("matrix is not positive semidefinite")]
    NotPsd,
    #[error("matrix is not an element of the algebra")]
    NotInAlgebra,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("undecidable at tolerance {0}: error radius too large")]
    Unresolvable(String),
    #[error("positivity margin collapsed while extending a point")]
    MarginCollapse,
    #[error("certificate missing: {0}")]
    CertificateMissing(String),
    #[error("degenerate cover width {0}")]
    DegenerateWidth(String),
    #[error("expected a positive outcome, got below({0})")]
    NotPositive(String),
    #[error("iteration cap of {0} reached before convergence")]
    IterationCap(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
