use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input violates a documented precondition.
    #[error("validation error: {0}")]
    Validation(String),

    /// The requested quantity has no finite value for this input.
    #[error("undefined: {0}")]
    Undefined(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported moment order: {0}")]
    UnsupportedOrder(String),

    #[error("missing symmetric moment of order ({0}, {1})")]
    MissingOrder(u32, u32),

    /// A numerical routine failed or lost too much accuracy.
    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("truncation leakage {tail_mass:e} exceeds tolerance {tolerance:e}")]
    TailMass { tail_mass: f64, tolerance: f64 },

    #[error("{path}: row {row}: {message}")]
    Format {
        path: String,
        row: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub(crate) fn undefined(msg: impl Into<String>) -> Self {
        Error::Undefined(msg.into())
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Numerical(_) | Error::TailMass { .. } => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
