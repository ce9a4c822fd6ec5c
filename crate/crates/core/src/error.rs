use thiserror::Error;

/// Errors raised by grid construction, problem evaluation, assembly and solves.
#[derive(Debug, Error)]
pub enum SlError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A coefficient could not be evaluated (zero leading coefficient, pole, NaN).
    #[error("coefficient evaluation failed at x = {x:e}: {what}")]
    SingularNode { x: f64, what: String },

    #[error("degenerate boundary condition at the {side} endpoint: f and g both vanish")]
    DegenerateBc { side: String },

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("endpoint {side} is not degenerate: p(e) = {p_value:e}")]
    NotDegenerate { side: String, p_value: f64 },

    #[error("eigensolver failed to converge on a {size}x{size} problem")]
    NumericalFailure { size: usize },

    #[error("not found: {0}")]
    NotFound(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = SlError> = std::result::Result<T, E>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(SlError::InvalidArgument(msg.into()))
}
