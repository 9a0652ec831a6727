use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unphysical state: {0}")]
    UnphysicalState(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("mode index {index} out of range for {modes} mode(s)")]
    ModeOutOfRange { index: usize, modes: usize },

    #[error("numerically degenerate: {0}")]
    NumericDegenerate(String),

    /// The selected mode carries (numerically) no photons.
    #[error("photon subtraction from a vacuum-like mode (normalization {normalization:e})")]
    SubtractionFromVacuum { normalization: f64 },

    #[error("inconsistent Bogoliubov row: {0}")]
    InconsistentRow(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid precondition: {0}")]
    InvalidPrecondition(String),

    #[error("truncation insufficient: leakage {leakage:e} exceeds tolerance {tolerance:e}")]
    TruncationInsufficient { leakage: f64, tolerance: f64 },

    #[error("memory budget exceeded: {required} bytes needed, budget {budget} bytes")]
    MemoryBudget { required: usize, budget: usize },

    #[error("grid too small: integral of the Wigner function is {normalization} (tolerance {tolerance:e})")]
    InsufficientGrid { normalization: f64, tolerance: f64 },

    #[error("decomposition failed: {0}")]
    Decomposition(String),

    #[error("parse error: {0}")]
    Parse(String),
}
