use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {kind}")]
    Parse { line: usize, kind: ParseErrorKind },

    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("CZ endpoints must be distinct (got {0} and {0})")]
    DegenerateCz(usize),

    #[error("{what}: {n_qubits} qubits exceeds the limit of {limit}")]
    TooManyQubits {
        what: &'static str,
        n_qubits: usize,
        limit: usize,
    },

    #[error("qubit count mismatch: state has {state}, operator has {operator}")]
    QubitMismatch { state: usize, operator: usize },

    #[error("expected {expected} parameters, got {got}")]
    ParamLength { expected: usize, got: usize },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("malformed coefficient {0:?}")]
    Coefficient(String),
    #[error("coefficient {0:?} is not finite")]
    NonFinite(String),
    #[error("imaginary coefficients are not allowed ({0:?})")]
    Imaginary(String),
    #[error("unknown Pauli axis in factor {0:?}")]
    UnknownAxis(String),
    #[error("malformed qubit index in factor {0:?}")]
    Index(String),
    #[error("qubit index {index} out of range for {n_qubits} qubits")]
    IndexOutOfRange { index: usize, n_qubits: usize },
    #[error("qubit {0} appears more than once in a term")]
    DuplicateQubit(usize),
    #[error("qubit indices must be strictly ascending ({prev} then {next})")]
    NonAscending { prev: usize, next: usize },
}

impl Error {
    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}
