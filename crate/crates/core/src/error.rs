use thiserror::Error;

/// Errors produced by the exact-algebra layers.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("generator index {index} out of range 1..={n}")]
    IndexOutOfRange { index: u8, n: usize },
    #[error("signature entry must be +1 or -1, got {0}")]
    BadSignatureEntry(i8),
    #[error("invalid blade label {0:?}")]
    BadLabel(String),
    #[error("basis order is not a bijection onto the 2^n blades: {0}")]
    BadBasisOrder(String),
    #[error("vector is not invertible (zero divisor or zero)")]
    NotInvertible,
    #[error("block of size {size} at ({row},{col}) does not match any unit of {algebra}")]
    Decomposition {
        algebra: &'static str,
        row: usize,
        col: usize,
        size: usize,
    },
    #[error("invalid correspondence map: {0}")]
    BadCorrespondence(String),
    #[error("system is not in the expected shape: {0}")]
    BadSystemShape(String),
    #[error("matrix shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("time-direction coefficient matrix is singular")]
    SingularTimeCoefficient,
}

pub type Result<T> = std::result::Result<T, AlgebraError>;
