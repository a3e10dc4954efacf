//! Zero fill-in incomplete LU and the two-sided preconditioned operator.

mod ilu0;

pub use ilu0::{ilu0, Ilu0Factor, Ilu0Operator};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum PrecondError {
    #[error("matrix must be square, got {nrows}x{ncols}")]
    NotSquare { nrows: usize, ncols: usize },
    #[error("row {0} is structurally empty")]
    EmptyRow(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

pub type Result<T> = std::result::Result<T, PrecondError>;
