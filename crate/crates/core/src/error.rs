use thiserror::Error;

/// Errors raised by the numerics, channel, region and export layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NonHermitian { deviation: f64 },

    #[error("invalid quantum state: {0}")]
    InvalidState(String),

    #[error("invalid probability vector: {0}")]
    InvalidPmf(String),

    #[error("{name} = {value} is outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("unsupported dimension: {0}")]
    UnsupportedDimension(String),

    #[error("invalid POVM: {0}")]
    InvalidPovm(String),

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("empty input")]
    EmptyInput,

    #[error("budget exceeded: {found} corners after {iterations} evaluations (need {required})")]
    BudgetExceeded {
        iterations: u64,
        found: usize,
        required: usize,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_range(name: &'static str, value: f64, lo: f64, hi: f64, range: &'static str) -> Result<f64> {
    if value.is_finite() && value >= lo && value <= hi {
        Ok(value)
    } else {
        Err(Error::OutOfRange { name, value, range })
    }
}
