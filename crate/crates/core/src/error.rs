use thiserror::Error;

/// Errors produced by the simulation library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("qubit index {index} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("qubit index {0} appears more than once in a support")]
    DuplicateQubit(usize),

    #[error("operator is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("cannot normalize a vector of norm {0:e}")]
    ZeroNorm(f64),

    #[error("expectation value has imaginary part {0:e}")]
    ComplexExpectation(f64),

    #[error("register of {n_qubits} qubits exceeds the dense budget of {budget}")]
    OverBudget { n_qubits: usize, budget: usize },

    #[error("interaction range {range} exceeds locality {locality}")]
    LocalityViolation { range: usize, locality: usize },

    #[error("states are orthogonal; the geodesic between them is not unique")]
    OrthogonalStates,

    #[error("state is an eigenstate of the operator (variance {0:e})")]
    ZeroVariance(f64),

    #[error("linear system could not be solved")]
    Singular,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
