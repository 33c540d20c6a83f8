use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),

    #[error("sample is empty")]
    EmptySample,

    #[error("sample contains a non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("sample sizes differ: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("sample mean must be positive")]
    ZeroMean,

    #[error("value {value} at index {index} must be {requirement}")]
    Domain {
        index: usize,
        value: f64,
        requirement: &'static str,
    },

    #[error("transform undefined at index {index} (value {value})")]
    UndefinedTransform { index: usize, value: f64 },

    #[error("{x} lies outside the domain [{lo}, {hi}]")]
    OutsideDomain { x: f64, lo: f64, hi: f64 },

    #[error("need at least {need} points, got {got}")]
    TooFewPoints { need: usize, got: usize },

    #[error("restriction leaves no testable indices (n = {n}, n_nu = {n_nu})")]
    NoTestableIndices { n: usize, n_nu: usize },

    #[error("invalid weight function: {0}")]
    InvalidWeight(String),

    #[error("invalid distortion function: {0}")]
    InvalidDistortion(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("worker pool: {0}")]
    Pool(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
