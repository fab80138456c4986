use thiserror::Error;

/// Errors raised by the simulators, analyzers and the circuit parser.
#[derive(Clone, Debug, Error, PartialEq)]
pub enum Error {
    #[error("bit index {index} out of range for width {width}")]
    IndexOutOfRange { index: usize, width: usize },
    #[error("gate uses bit {index} more than once")]
    RepeatedIndex { index: usize },
    #[error("bit {index} appears in two gates of step {step}")]
    OverlappingGates { step: usize, index: usize },
    #[error("width mismatch: expected {expected}, found {found}")]
    WidthMismatch { expected: usize, found: usize },
    #[error("value {value} does not fit in {width} bits")]
    ValueOutOfRange { value: u64, width: usize },
    #[error("map is not a bijection: {0}")]
    NotBijective(String),
    #[error("e-numbers carry different time tags ({left} vs {right}); retime first")]
    TimeTagMismatch { left: i64, right: i64 },
    #[error("matrix is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },
    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },
    #[error("{what} needs {requested} qubits but the cap is {cap}")]
    ResourceLimit {
        what: &'static str,
        requested: usize,
        cap: usize,
    },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("{line}:{column}: {message} (at `{token}`)")]
    Parse {
        line: usize,
        column: usize,
        token: String,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
