use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QsiError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian: max |A - A^H| = {deviation:e} exceeds {tolerance:e}")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("invalid density operator: {check} (measured {measured:e})")]
    InvalidDensity { check: &'static str, measured: f64 },

    #[error("state vector is not normalized: |psi|^2 = {norm_sq}")]
    NotNormalized { norm_sq: f64 },

    #[error("unknown subsystem label `{0}`")]
    UnknownLabel(String),

    #[error("duplicate subsystem label `{0}`")]
    DuplicateLabel(String),

    #[error("label sets overlap on `{0}`")]
    OverlappingLabels(String),

    #[error("invalid layout: {0}")]
    InvalidLayout(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("usage ({i}, {j}) out of bounds for m = {m}, n = {n}")]
    UsageOutOfBounds { i: usize, j: usize, m: usize, n: usize },

    #[error("expected a {expected} resource vector, got {found}")]
    WrongChannelKind {
        expected: &'static str,
        found: &'static str,
    },

    #[error("document error: {0}")]
    Document(String),
}

pub type Result<T, E = QsiError> = std::result::Result<T, E>;
