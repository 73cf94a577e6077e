use thiserror::Error;

/// Errors raised by the numerical core, the simulator and the certifier.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("unsupported dimension {0} (supported: 2..=8)")]
    UnsupportedDimension(usize),

    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPsd(f64),

    #[error("trace is {0}, expected 1")]
    InvalidTrace(f64),

    #[error("operator is not unitary (max deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("invalid measurement: {0}")]
    InvalidMeasurement(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("expected {expected} items, got {got}")]
    CountMismatch { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    /// Measured data contradicts the assumptions of the chosen trust level.
    #[error("data inconsistent with trust assumptions: {0}")]
    InconsistentData(String),
}

pub type Result<T> = std::result::Result<T, Error>;
