use thiserror::Error;

/// Errors produced by the sequence, polynomial, root and closed-form layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("initial conditions have length {got}, recurrence order is {expected}")]
    InitLengthMismatch { expected: usize, got: usize },

    #[error("root iteration did not converge: {0}")]
    ConvergenceFailure(String),

    #[error("linear system is ill-conditioned at {precision_bits} bits (residual {residual})")]
    IllConditioned { precision_bits: u32, residual: String },

    #[error("precision exhausted at n={n} with {precision_bits} bits (residual {residual})")]
    PrecisionExhausted {
        n: u64,
        precision_bits: u32,
        residual: String,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

impl Error {
    /// True for failures a caller may retry with more precision.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::ConvergenceFailure(_) | Error::IllConditioned { .. } | Error::PrecisionExhausted { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
