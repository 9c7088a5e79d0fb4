use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit {qubit} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },

    #[error("qubit {0} listed more than once")]
    DuplicateQubit(usize),

    #[error("qubit list is empty")]
    EmptyQubitList,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("{n} qubits exceeds the supported maximum of {max}")]
    TooManyQubits { n: usize, max: usize },

    #[error("Kraus set is not trace preserving (max deviation {0:.3e})")]
    NotTracePreserving(f64),

    #[error("invalid probability {value} for {what}")]
    InvalidProbability { what: &'static str, value: f64 },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid assignment matrix: {0}")]
    InvalidAssignment(String),

    #[error("shot count must be positive")]
    ZeroShots,

    #[error("expected {expected} parameters, found {found}")]
    ParameterCount { expected: usize, found: usize },

    #[error("condition index {t} out of range (0..{max})")]
    ConditionOutOfRange { t: usize, max: usize },

    #[error("folding scale must be an odd integer >= 1, got {0}")]
    InvalidFoldScale(usize),

    #[error("channel arity must be 1 or 2, got {0}")]
    InvalidArity(usize),

    #[error("channel is not invertible: {0}")]
    NotInvertible(String),

    #[error("extrapolation needs at least {needed} points, got {found}")]
    InsufficientPoints { needed: usize, found: usize },

    #[error("singular extrapolation fit: {0}")]
    SingularFit(String),

    #[error("parameter-shift gradients are only defined for noiseless evaluation")]
    NoisyGradient,

    #[error("invalid ansatz: {0}")]
    InvalidAnsatz(String),

    #[error("invalid target family: {0}")]
    InvalidTarget(String),

    #[error("invalid training configuration: {0}")]
    InvalidTraining(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
