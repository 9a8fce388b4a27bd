use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("failed to parse instance: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("zero vector has no discrepancy ratio")]
    ZeroVector,

    #[error("invalid node subset: {0}")]
    InvalidSubset(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("problem too large for brute force: {what} = {size} exceeds {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("layer flow infeasible: routed {routed} of {required} (internal invariant violated)")]
    FlowInfeasible { routed: f64, required: f64 },

    #[error("step underflow at t = {t}: dt = {dt:e}; state = {state:?}")]
    StepUnderflow { t: f64, dt: f64, state: Vec<f64> },

    #[error("prior vectors are not mutually w-orthogonal (|<f_{i}, f_{j}>_w| = {value:e})")]
    NonOrthogonalPriors { i: usize, j: usize, value: f64 },

    #[error("not a probability measure: {0}")]
    NotProbability(String),

    #[error("simulation did not reach the target within t = {horizon}")]
    NotMixed { horizon: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
