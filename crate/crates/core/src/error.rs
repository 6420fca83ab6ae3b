use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A grid or quadrature is coarser than the resolution rule demands.
    #[error("under-resolved {what}: spacing {actual:e} exceeds the limit {required:e}")]
    Resolution {
        what: String,
        required: f64,
        actual: f64,
    },

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("gradient undefined at ({x}, {y})")]
    UndefinedGradient { x: f64, y: f64 },

    /// The iterative solver hit its iteration cap.
    #[error("no convergence after {iterations} iterations (relative residual {residual:e})")]
    Convergence {
        iterations: usize,
        residual: f64,
        /// Relative residual recorded every few iterations.
        history: Vec<f64>,
    },

    #[error("zero average over {0}")]
    ZeroAverage(String),

    #[error("nonpositive kernel density at cell {index} (x = {x})")]
    DegenerateCell { index: usize, x: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
