use thiserror::Error;

/// Errors raised by group construction, the Gelfand engine and the file formats.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("group too large: closure exceeds order cap {cap}")]
    GroupTooLarge { cap: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid group table: {0}")]
    InvalidGroupTable(String),

    #[error("invalid exponent: {0}")]
    InvalidExponent(f64),

    #[error("domain mismatch: expected length {expected}, got {actual}")]
    DomainMismatch { expected: usize, actual: usize },

    #[error("dimension mismatch: expected length {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("not a subgroup: {0}")]
    NotASubgroup(String),

    #[error("not a Gelfand pair: coset algebra fails to commute (defect {defect:e})")]
    NotGelfandPair { defect: f64 },

    #[error("degenerate spectrum: increase attempts (eigenvalue gap below {tol:e} after {attempts} draws)")]
    DegenerateSpectrum { tol: f64, attempts: usize },

    #[error("spectral inconsistency: analytic and dense singular values differ by {0:e}")]
    SpectralInconsistency(f64),

    #[error("kernel and spectral application disagree by {0:e}")]
    KernelMismatch(f64),

    #[error("non-finite value in input")]
    NonFinite,

    #[error("unknown builtin pair {0:?}")]
    UnknownBuiltin(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
