use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not in SU(2): unitarity defect {unitarity:.3e}, determinant defect {determinant:.3e}")]
    NotSpecialUnitary { unitarity: f64, determinant: f64 },

    #[error("matrix is not in su(2): skew-hermitian defect {skew:.3e}, trace defect {trace:.3e}")]
    NotInAlgebra { skew: f64, trace: f64 },

    #[error("logarithm is undefined at -I (principal branch is ambiguous)")]
    LogBranchSingularity,

    #[error("qubit count {0} outside the supported range 1..=12")]
    QubitCountOutOfRange(usize),

    #[error("qubit index {index} out of range for a {num_qubits}-qubit state")]
    QubitOutOfRange { index: usize, num_qubits: usize },

    #[error("two-qubit operation needs distinct qubits, got {0} twice")]
    RepeatedQubit(usize),

    #[error("expected {expected} values, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("operation needs a single-qubit state, got {0} qubits")]
    NotSingleQubit(usize),

    #[error("state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("series too short: need more than {required} points, got {actual}")]
    SeriesTooShort { required: usize, actual: usize },

    #[error("relative standard deviation is undefined for a zero-mean series")]
    ZeroMean,

    #[error("trajectory is empty")]
    EmptyTrajectory,

    #[error("column {column} out of range for {columns} parameter columns")]
    ColumnOutOfRange { column: usize, columns: usize },

    #[error("{path}: line {line}: {message}")]
    Parse {
        path: String,
        line: u64,
        message: String,
    },

    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("json error on {path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::InvalidConfig(msg.into())
    }
}
