//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A distribution or config parameter is out of its valid range.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// The confidence level leaves too few observations above the quantile
    /// index for the requested estimator.
    #[error("tail too small: alpha={alpha} with n={n} leaves {available} tail observation(s), need {needed}")]
    InsufficientTail {
        alpha: f64,
        n: usize,
        needed: usize,
        available: usize,
    },

    /// A sample fails basic sanity checks (too short, or non-finite values).
    #[error("invalid sample: {0}")]
    InvalidSample(String),

    /// Trial estimates average out near zero, so standardizing by the mean
    /// would amplify noise without bound.
    #[error("mean of trial estimates is {mean:.3e}, too close to zero to standardize")]
    DegenerateMean { mean: f64 },

    /// Adaptive quadrature ran out of subdivision depth before reaching the
    /// requested tolerance.
    #[error("quadrature did not converge on [{a}, {b}] at tolerance {tol:.1e}")]
    QuadratureNonConvergence { a: f64, b: f64, tol: f64 },

    /// Experiment configuration is structurally invalid.
    #[error("config error: {0}")]
    Config(String),

    /// A loss file line failed to parse.
    #[error("{path}:{line}: cannot parse `{text}` as a number")]
    LossParse {
        path: String,
        line: usize,
        text: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn bad_param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
