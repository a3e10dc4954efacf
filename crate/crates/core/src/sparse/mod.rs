//! Complex CSR and dense matrices, Matrix Market I/O.

mod csr;
pub(crate) mod dense;
pub mod mm;
pub mod vecops;

pub use csr::SparseMatrix;
pub use dense::{thin_qr, DenseLu, DenseMatrix, ThinQr};
pub use mm::{mm_read, mm_read_vector, mm_write, mm_write_vector, MatrixMarket, MmMetadata};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SparseError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix must be square, got {nrows}x{ncols}")]
    NotSquare { nrows: usize, ncols: usize },
    #[error("invalid CSR structure: {0}")]
    InvalidStructure(String),
    #[error("entry ({row}, {col}) outside {nrows}x{ncols}")]
    IndexOutOfBounds { row: usize, col: usize, nrows: usize, ncols: usize },
    #[error("singular matrix: zero pivot in column {0}")]
    Singular(usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, SparseError>;
