use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("stage {t} out of range 1..={horizon}")]
    StageOutOfRange { t: usize, horizon: usize },

    #[error("invalid action space: {0}")]
    InvalidSpace(String),

    #[error("invalid stage cost: {0}")]
    InvalidCost(String),

    #[error("function class violated: {0}")]
    InvalidClass(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("solver did not converge after {iterations} iterations (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("brute-force grid has {points} points, limit is {limit}")]
    GridTooLarge { points: f64, limit: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("point outside the action space: {0}")]
    OutsideSpace(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
