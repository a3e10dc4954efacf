use std::fmt;

use serde::Serialize;

/// Pipeline stage an error came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Config,
    Load,
    Precond,
    Subspace,
    Solve,
    Output,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::Config => "config",
            Self::Load => "load",
            Self::Precond => "precond",
            Self::Subspace => "subspace",
            Self::Solve => "solve",
            Self::Output => "output",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Bad flags, unreadable files, problems too large for a dense step.
    Input,
    Internal,
}

#[derive(Debug, thiserror::Error)]
#[error("{stage}: {message}")]
pub struct CliError {
    pub stage: Stage,
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    pub fn input(stage: Stage, message: impl fmt::Display) -> Self {
        Self { stage, kind: ErrorKind::Input, message: message.to_string() }
    }

    pub fn internal(stage: Stage, message: impl fmt::Display) -> Self {
        Self { stage, kind: ErrorKind::Internal, message: message.to_string() }
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::Input => exit::INPUT,
            ErrorKind::Internal => exit::INTERNAL,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const NOT_CONVERGED: i32 = 1;
    pub const INPUT: i32 = 2;
    pub const INTERNAL: i32 = 3;
}
