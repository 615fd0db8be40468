use thiserror::Error;

/// Errors raised by game construction, evaluation and the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid group table: {0}")]
    InvalidGroup(String),

    #[error("{what} out of range: {value} (allowed {allowed})")]
    OutOfRange {
        what: &'static str,
        value: usize,
        allowed: String,
    },

    #[error("invalid game: {0}")]
    InvalidGame(String),

    #[error("invalid input density: {0}")]
    InvalidDensity(String),

    #[error("invalid correlation: {0}")]
    InvalidCorrelation(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid digraph: {0}")]
    InvalidDigraph(String),

    #[error("search too large: {size} strategies exceeds guard {guard}")]
    SearchTooLarge { size: f64, guard: f64 },

    #[error("game is not square (nx = {nx}, ny = {ny})")]
    NotSquare { nx: usize, ny: usize },

    #[error("game is not synchronous")]
    NotSynchronous,

    #[error("matrix is not symmetric/hermitian (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal residual {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("matrix is numerically singular (smallest singular value {0:e})")]
    Singular(f64),

    #[error("invalid frame: {0}")]
    InvalidFrame(String),

    #[error("invalid unitary: {0}")]
    InvalidUnitary(String),

    #[error("not a cost-free matrix: {0}")]
    NotCostFree(String),

    #[error("rounding threshold undefined: {0}")]
    ThresholdUndefined(String),

    #[error("certificate check failed: {what} off by {residual:e}")]
    CertificateCheck { what: String, residual: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
