use thiserror::Error;

/// Every failure the engine can report.
///
/// `SelfTest` is reserved for outcomes that would contradict a theorem the
/// engine checks (an engine bug or a corrupted certificate); everything else
/// is a problem with the input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("in block `{block}`: {message}")]
    Semantic { block: String, message: String },
    #[error("{0}")]
    Input(String),
    #[error("self-test failure: {0}")]
    SelfTest(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Error {
        Error::Input(msg.into())
    }

    pub fn self_test(msg: impl Into<String>) -> Error {
        Error::SelfTest(msg.into())
    }

    pub fn semantic(block: impl Into<String>, msg: impl Into<String>) -> Error {
        Error::Semantic {
            block: block.into(),
            message: msg.into(),
        }
    }

    /// Process exit status: 2 for input errors, 3 for self-test failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::SelfTest(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
