use thiserror::Error;

/// Errors raised by the numerical lab.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum LabError {
    #[error("invalid dimension N = {0} (need N >= 4)")]
    InvalidDimension(usize),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("non-finite sample at r = {radius}")]
    NonFinite { radius: f64 },

    #[error("quadrature failure: {0}")]
    Quadrature(String),

    #[error("zero norm: {0}")]
    ZeroNorm(&'static str),

    #[error("exponent overflow: {0}")]
    Overflow(String),

    #[error("mountain-pass geometry not found: {0}")]
    GeometryNotFound(String),

    #[error("solver failure: {0}")]
    Solver(String),
}

impl LabError {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        LabError::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, LabError>;
