use thiserror::Error;

/// One violated invariant found while validating an input record.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub field: &'static str,
    pub message: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

#[derive(Debug, Error)]
pub enum HqError {
    #[error("domain error in `{param}`: {message}")]
    Domain {
        param: &'static str,
        message: String,
    },

    #[error("invalid setup: {}", join(.0))]
    Validation(Vec<Violation>),

    #[error("quadrature insufficient for order {order}: {message}")]
    InsufficientQuadrature { order: usize, message: String },

    #[error("output error: {0}")]
    Output(String),
}

fn join(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

impl HqError {
    pub(crate) fn domain(param: &'static str, message: impl Into<String>) -> Self {
        HqError::Domain {
            param,
            message: message.into(),
        }
    }
}

impl From<csv::Error> for HqError {
    fn from(e: csv::Error) -> Self {
        HqError::Output(e.to_string())
    }
}

impl From<std::io::Error> for HqError {
    fn from(e: std::io::Error) -> Self {
        HqError::Output(e.to_string())
    }
}

impl From<serde_json::Error> for HqError {
    fn from(e: serde_json::Error) -> Self {
        HqError::Output(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, HqError>;
