//! Krylov solvers: restarted GMRES and BiCG over abstract linear operators.

mod bicg;
mod gmres;
mod operator;
mod report;
mod shifted;

pub use bicg::{bicg, bicg_restarting, bicg_with_shadow};
pub use gmres::gmres;
pub use operator::{DenseOperator, IdentityOperator, LinearOperator, ShiftedOperator};
pub use report::{SolveReport, SolverConfig};
pub use shifted::{solve_shifted, solve_shifted_op};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KrylovError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("operator does not provide an adjoint")]
    AdjointUnavailable,
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, KrylovError>;

pub(crate) fn check_dims(n: usize, b: &[crate::C64], x0: &[crate::C64]) -> Result<()> {
    if b.len() != n {
        return Err(KrylovError::DimensionMismatch { expected: n, found: b.len() });
    }
    if x0.len() != n {
        return Err(KrylovError::DimensionMismatch { expected: n, found: x0.len() });
    }
    Ok(())
}
