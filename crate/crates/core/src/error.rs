use thiserror::Error;

/// Errors raised by the matrix containers, factorizations and file readers.
///
/// Pivot indices are 1-based, matching the step numbering of the
/// factorizations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid bandwidths: n = {n}, r_lower = {r_lower}, r_upper = {r_upper}")]
    InvalidBandwidth { n: usize, r_lower: usize, r_upper: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("entry ({i}, {j}) lies outside the band")]
    OutsideBand { i: usize, j: usize },

    #[error("entry ({i}, {j}) lies outside the region covered by the generators")]
    OutsideCoveredRegion { i: usize, j: usize },

    #[error("non-finite value at ({i}, {j})")]
    NonFinite { i: usize, j: usize },

    #[error("matrix is singular to working precision at pivot {index}")]
    Singular { index: usize },

    #[error("zero pivot at step {index}: matrix is not strongly regular")]
    ZeroPivot { index: usize },

    #[error("matrix is not unit lower triangular with lower bandwidth {r}")]
    NotUnitLowerBand { r: usize },

    #[error("matrix is not upper triangular")]
    NotUpperTriangular,

    #[error("transform product has the wrong ordering or closing block for this operation")]
    WrongOrder,

    #[error("could not reach condition number {target:e} (closest {achieved:e})")]
    ConditionTarget { target: f64, achieved: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
