use thiserror::Error;

/// Errors surfaced by every numerical routine in this crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Input outside a function's domain (non-positive scale, invalid
    /// parameter combination, dimension mismatch, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// An iterative procedure failed to meet its tolerance. Carries the
    /// best available estimate and an error bound for it.
    #[error("{context}: did not converge (best estimate {estimate}, error bound {error_bound})")]
    Convergence {
        context: String,
        estimate: f64,
        error_bound: f64,
    },

    /// Input data could not be parsed.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Every fit restart failed to produce a finite objective.
    #[error("fit error: {0}")]
    Fit(String),

    /// Generic evaluation failure (non-finite intermediate value).
    #[error("evaluation error: {0}")]
    Evaluation(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn convergence(context: impl Into<String>, estimate: f64, error_bound: f64) -> Self {
        Error::Convergence {
            context: context.into(),
            estimate,
            error_bound,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
