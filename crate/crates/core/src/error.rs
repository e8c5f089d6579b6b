use thiserror::Error;

/// Errors raised by state construction, gate building and protocol runs.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("register must have at least one wire")]
    EmptyRegister,

    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("probability at index {index} is negative ({value})")]
    NegativeProbability { index: usize, value: f64 },

    #[error("probabilities sum to {sum}, expected 1")]
    NotNormalized { sum: f64 },

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("trace is {0}, expected 1")]
    InvalidTrace(f64),

    #[error("matrix is not positive semi-definite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("matrix is not unitary (max deviation of U U^dagger from I is {0:e})")]
    NotUnitary(f64),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("wire {wire} out of range for a {n_wires}-wire register")]
    WireOutOfRange { wire: usize, n_wires: usize },

    #[error("wire {0} used twice where distinct wires are required")]
    WireCollision(usize),

    #[error("wire {0} listed more than once")]
    DuplicateWire(usize),

    #[error("partial trace needs at least one kept wire")]
    EmptyKeepSet,

    #[error("gate {0} has no diagonal fast path")]
    UnsupportedGate(String),

    #[error("dense form needs {wires} wires, limit is {max}")]
    TooManyWiresForDense { wires: usize, max: usize },

    #[error("classical bit must be 0 or 1, got {0}")]
    InvalidBit(u8),

    #[error("no {kind} named `{name}` (known: {known})")]
    UnknownStrategy {
        kind: &'static str,
        name: String,
        known: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
