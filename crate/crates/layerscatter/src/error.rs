//! Error type shared by all modules.

use thiserror::Error;

/// Library error. The CLI maps variants onto exit codes: configuration and
/// domain problems → 2, numeric failures → 3, inconsistent scattering data
/// → 4, resource caps → 5.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied argument violates a precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An input value lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numeric procedure failed to reach its target tolerance; `achieved`
    /// carries the tolerance or error bound actually attained.
    #[error("numeric error: {message}{}", achieved.map(|a| format!(" (achieved {a:.3e})")).unwrap_or_default())]
    Numeric {
        message: String,
        achieved: Option<f64>,
    },

    /// Scattering data produced a non-physical recursion coefficient.
    /// `step` is the 1-based recursion index at which |r| reached 1.
    #[error("inconsistent data at step {step}: |r| = {value} is not < 1")]
    DataInconsistency { step: usize, value: f64 },

    /// An enumeration or node count exceeded its cap.
    #[error("resource cap exceeded: needed {needed}, cap {cap}")]
    ResourceCap { needed: usize, cap: usize },

    /// Constant disk maps have no inverse.
    #[error("constant disk maps are not invertible")]
    NotInvertible,

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn numeric(msg: impl Into<String>, achieved: Option<f64>) -> Self {
        Error::Numeric {
            message: msg.into(),
            achieved,
        }
    }
}
