use ckm_core::GeometryError;
use thiserror::Error;

/// Failures of the harness layer. All of them are input errors (exit code 2).
#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema error in `{field}`: {message}")]
    Schema { field: String, message: String },
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("scene generation exhausted after {0} rejections")]
    GenerationExhausted(usize),
    #[error("element `{0}` has no real points in the chart")]
    UnboundedElement(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl HarnessError {
    pub(crate) fn schema(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Schema {
            field: field.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;
