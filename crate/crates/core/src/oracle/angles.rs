use super::svd::singular_values;
use super::{OracleError, Result};
use crate::sparse::{thin_qr, DenseMatrix};

/// Principal angles between `range(U)` and `range(W)`, ascending, in radians.
///
/// Bases need full column rank; they are orthonormalized first. Cosines come
/// from `U^H W` and sines from `(I - U U^H) W`; each angle uses whichever is
/// better conditioned.
pub fn principal_angles(u: &DenseMatrix, w: &DenseMatrix) -> Result<Vec<f64>> {
    if u.nrows() != w.nrows() {
        return Err(OracleError::DimensionMismatch { expected: u.nrows(), found: w.nrows() });
    }
    let p = u.ncols().min(w.ncols());
    if p == 0 {
        return Ok(vec![]);
    }
    let orth = |m: &DenseMatrix| thin_qr(m).map(|f| f.q).map_err(|_| OracleError::DimensionMismatch {
        expected: m.ncols(),
        found: m.nrows(),
    });
    let (u, w) = (orth(u)?, orth(w)?);
    let overlap = u.adjoint_matmul(&w);
    let cosines = singular_values(&overlap);
    let residual = w.sub(&u.matmul(&overlap));
    let mut sines = singular_values(&residual);
    sines.reverse();
    Ok((0..p)
        .map(|i| {
            let cs = cosines[i].min(1.0);
            if cs * cs <= 0.5 {
                cs.acos()
            } else {
                sines[i].clamp(0.0, 1.0).asin()
            }
        })
        .collect())
}
