use thiserror::Error;

/// Errors raised by shift construction, potentials, and the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid shift: {0}")]
    InvalidShift(String),

    #[error("invalid word: {0}")]
    InvalidWord(String),

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("word of length {len} is too short for {windows} windows of memory {memory}")]
    WordTooShort { len: usize, windows: usize, memory: usize },

    #[error("word count overflow at length {0}")]
    Overflow(usize),

    #[error("enumeration cap exceeded: {count} words needed, cap is {cap}")]
    CapExceeded { count: u128, cap: u64 },

    #[error("irreducibility required: the transition matrix is not irreducible")]
    NotIrreducible,

    #[error("topological mixing required: the transition matrix is irreducible with period {0}")]
    NotMixing(usize),

    #[error("potential memory {found} not supported here (expected at most {max})")]
    MemoryMismatch { found: usize, max: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("psi must be strictly positive: min value {min} is not above floor {floor}")]
    NonPositivePsi { min: f64, floor: f64 },

    #[error("{what} did not converge after {iterations} iterations (residual {residual:e})")]
    NotConverged {
        what: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
