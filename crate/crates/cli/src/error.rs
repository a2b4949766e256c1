//! Errors of the command-line layer and their exit codes.

use thiserror::Error;

/// Successful run.
pub const EXIT_OK: i32 = 0;
/// Internal failure (I/O, cache, unexpected arithmetic error).
pub const EXIT_FAILURE: i32 = 1;
/// Two routes to the same class disagreed.
pub const EXIT_MISMATCH: i32 = 2;
/// A computation exceeded a configured bound.
pub const EXIT_RESOURCE_LIMIT: i32 = 3;
/// The request was malformed or out of range.
pub const EXIT_INPUT: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{flag}: {source}")]
    Arg {
        flag: &'static str,
        #[source]
        source: schubpf::Error,
    },

    #[error(transparent)]
    Core(#[from] schubpf::Error),

    #[error("invalid input: {0}")]
    Input(String),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn arg(flag: &'static str) -> impl FnOnce(schubpf::Error) -> CliError {
        move |source| CliError::Arg { flag, source }
    }

    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Arg { source, .. } | CliError::Core(source) => core_exit_code(source),
            CliError::Input(_) => EXIT_INPUT,
            CliError::Json(_) => EXIT_FAILURE,
        }
    }
}

fn core_exit_code(e: &schubpf::Error) -> i32 {
    use schubpf::Error as E;
    match e {
        E::ResourceLimit(_) => EXIT_RESOURCE_LIMIT,
        E::NonDivisible { .. } | E::Cache(_) => EXIT_FAILURE,
        _ => EXIT_INPUT,
    }
}
