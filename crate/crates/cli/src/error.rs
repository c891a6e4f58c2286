use thiserror::Error;

/// Exit status of a command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    CheckFailed = 1,
    InputError = 2,
    BudgetOverflow = 3,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: syntax error at line {line}, column {column}: {message}")]
    Syntax {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{path}: {message}")]
    Schema { path: String, message: String },

    #[error("unresolved {namespace} reference `{label}`")]
    Unresolved { namespace: &'static str, label: String },

    #[error("duplicate {namespace} label `{label}`")]
    Duplicate { namespace: &'static str, label: String },

    #[error("invalid document: {0}")]
    Invalid(String),

    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    #[error(transparent)]
    Engine(#[from] ionad::Error),
}

impl CliError {
    pub fn status(&self) -> Status {
        match self {
            CliError::Engine(e) if e.is_budget() => Status::BudgetOverflow,
            CliError::Engine(ionad::Error::NotFlat(_) | ionad::Error::Internal(_)) => Status::CheckFailed,
            _ => Status::InputError,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
