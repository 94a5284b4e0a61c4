use thiserror::Error;

/// Errors produced by the geometric and combinatorial kernels.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("the lifting induces the trivial subdivision")]
    TrivialSubdivision,

    #[error("triangulation is not regular")]
    NotRegular,

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("corrupt checkpoint: {0}")]
    Checkpoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
