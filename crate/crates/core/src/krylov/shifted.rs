use super::{bicg, LinearOperator, Result, ShiftedOperator, SolveReport, SolverConfig};
use crate::sparse::{vecops, SparseMatrix};
use crate::C64;

/// Solve `(zI - A) x = y` by BiCG on the explicitly shifted CSR matrix.
pub fn solve_shifted(
    a: &SparseMatrix,
    z: C64,
    y: &[C64],
    cfg: &SolverConfig,
) -> std::result::Result<(Vec<C64>, SolveReport), crate::krylov::KrylovError> {
    let shifted = a.shifted(z).map_err(|_| crate::krylov::KrylovError::DimensionMismatch {
        expected: a.nrows(),
        found: a.ncols(),
    })?;
    bicg(&shifted, y, &vecops::zeros(y.len()), cfg)
}

/// Solve `(zI - A) x = y` for a matrix-free `A`.
pub fn solve_shifted_op<O: LinearOperator + ?Sized>(
    a: &O,
    z: C64,
    y: &[C64],
    cfg: &SolverConfig,
) -> Result<(Vec<C64>, SolveReport)> {
    let op = ShiftedOperator::new(a, z);
    bicg(&op, y, &vecops::zeros(y.len()), cfg)
}
