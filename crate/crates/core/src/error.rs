use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("a histogram needs at least one bin")]
    EmptyHistogram,
    #[error("{what}: expected length {expected}, found {found}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("bins are not ordered at bin {index}")]
    NonOrderedBins { index: usize },
    #[error("negative weight {weight} at bin {index}")]
    NegativeWeight { index: usize, weight: f64 },
    #[error("weights sum to {sum}, expected 1")]
    WeightSumNotOne { sum: f64 },
    #[error("bin {index} has a non-finite bound")]
    UnboundedBin { index: usize },
    #[error("every bin has zero weight")]
    AllWeightsZero,
    #[error("t = {t} lies outside [0, 1]")]
    OutOfDomain { t: f64 },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("function decreases at piece {index}")]
    NotMonotone { index: usize },
    #[error("negative half-range at piece {index}")]
    NegativeHalfRange { index: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("hessian is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("constrained index {index} is out of range")]
    InvalidConstraint { index: usize },
    #[error("active-set solver did not converge after {iterations} iterations")]
    MaxIterationsExceeded { iterations: usize },
    #[error("quadratic problem is not positive semidefinite")]
    NotPsd,
    #[error("quadratic problem has non-finite coefficients")]
    NonFinite,
    #[error("symbolic table has no units or no predictors")]
    EmptyTable,
    #[error("expected {expected} predictors, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("response has zero dispersion around its mean; goodness of fit is undefined")]
    DegenerateResponse,
    #[error("negative slope would reverse bin order")]
    NegativeSlopeUnsupported,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
