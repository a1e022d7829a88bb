use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("basis index {index} out of range for {n} qubits")]
    IndexOutOfRange { n: usize, index: usize },

    #[error("{what} needs at least {min} qubits, got {n}")]
    TooFewQubits { what: &'static str, min: usize, n: usize },

    #[error("{n} qubits exceeds the limit of {max}")]
    TooManyQubits { n: usize, max: usize },

    #[error("amplitude vector has length {len}, expected {expected}")]
    LengthMismatch { len: usize, expected: usize },

    #[error("state is not normalized: squared norm {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },

    #[error("qubit count mismatch: state has {state}, bipartition has {part}")]
    QubitMismatch { state: usize, part: usize },

    #[error("invalid mask {mask:#x} for {n} qubits")]
    InvalidMask { n: usize, mask: u32 },

    #[error("invalid qubit index {qubit} for {n} qubits")]
    InvalidQubit { n: usize, qubit: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("empty distribution")]
    EmptyDistribution,

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by floating-point breakdown rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Numerical(_))
    }
}
