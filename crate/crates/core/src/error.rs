use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the domain of the map (zero coordinate, scale 0, log of a
    /// non-positive number, ...).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A quantifier or precondition of the requested construction is unmet.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("construction error: {0}")]
    Construction(String),

    #[error("degenerate line: {0}")]
    DegenerateLine(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// Walk generation ran out of retries; the walk built so far is attached
    /// as JSON so the error stays independent of the scalar type.
    #[error("walk generation failed after {steps_done} of {steps_requested} steps: {reason}")]
    Generation {
        steps_done: usize,
        steps_requested: usize,
        reason: String,
        partial_walk: String,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
