use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("exponent must satisfy p >= 2 and be finite, got {0}")]
    ExponentOutOfRange(f64),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("radius {r} outside profile range [{lo}, {hi}]")]
    OutOfProfileRange { r: f64, lo: f64, hi: f64 },

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("tail estimation impossible: {0}")]
    TailEstimation(String),

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("solver did not converge: {iterations} iterations, residual {residual:e}")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("invalid experiment: {0}")]
    InvalidExperiment(String),

    #[error("need at least 3 strictly increasing truncation levels, got {0}")]
    TooFewLevels(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
