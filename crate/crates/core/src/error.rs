use std::fmt;

use thiserror::Error;

use crate::term::Label;

/// Location-tagged syntax error from one of the object-language parsers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Error)]
pub enum Error {
    #[error("label {0} does not occur in the term")]
    LabelNotFound(Label),
    #[error("label {label} is spelled both `{first}` and `{second}`")]
    InconsistentLabel {
        label: Label,
        first: String,
        second: String,
    },
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("{language}: malformed term: {detail}")]
    MalformedTerm {
        language: &'static str,
        detail: String,
    },
    #[error("name-fix did not converge within {budget} iterations (resolver assumptions violated?)")]
    IterationBudgetExceeded { budget: usize },
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("call to `{function}` has {found} arguments, expected {expected}")]
    ArityMismatch {
        function: String,
        expected: usize,
        found: usize,
    },
}

impl Error {
    pub(crate) fn malformed(language: &'static str, detail: impl Into<String>) -> Self {
        Error::MalformedTerm {
            language,
            detail: detail.into(),
        }
    }
}
