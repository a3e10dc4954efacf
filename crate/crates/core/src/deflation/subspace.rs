use super::{DeflationError, Result};
use crate::krylov::LinearOperator;
use crate::sparse::{thin_qr, DenseLu, DenseMatrix};
use crate::C64;

/// Relative `R` diagonal below which a column of `Zraw` counts as dependent.
pub const RANK_TOL: f64 = 1e-8;
/// Largest accepted 1-norm condition estimate of `Z^H A Z`.
pub const MAX_COARSE_CONDITION: f64 = 1e14;

/// Orthonormal `Z` together with `AZ` and the LU factors of `E = Z^H A Z`.
#[derive(Debug, Clone)]
pub struct DeflationSubspace {
    z: DenseMatrix,
    az: DenseMatrix,
    coarse: DenseMatrix,
    lu: DenseLu,
    numerical_rank: usize,
    coarse_condition: f64,
}

/// Orthonormalize `zraw` and factor the coarse matrix for `a`.
pub fn build_subspace<O: LinearOperator + ?Sized>(a: &O, zraw: &DenseMatrix) -> Result<DeflationSubspace> {
    let n = a.dim();
    if zraw.nrows() != n {
        return Err(DeflationError::DimensionMismatch { expected: n, found: zraw.nrows() });
    }
    if zraw.ncols() == 0 || zraw.ncols() > n {
        return Err(DeflationError::DimensionMismatch { expected: n, found: zraw.ncols() });
    }
    let qr = thin_qr(zraw).map_err(|_| DeflationError::DimensionMismatch { expected: n, found: zraw.ncols() })?;
    let numerical_rank = qr.numerical_rank(RANK_TOL);
    DeflationSubspace::from_orthonormal(a, qr.q, numerical_rank)
}

impl DeflationSubspace {
    /// Use `z` as given; its columns must already be orthonormal.
    pub fn from_orthonormal<O: LinearOperator + ?Sized>(a: &O, z: DenseMatrix, numerical_rank: usize) -> Result<Self> {
        let m = z.ncols();
        let mut az = DenseMatrix::zeros(a.dim(), m);
        for j in 0..m {
            a.apply(z.col(j), az.col_mut(j));
        }
        let coarse = z.adjoint_matmul(&az);
        let lu = DenseLu::factor(&coarse).map_err(|_| DeflationError::SingularCoarse(f64::INFINITY))?;
        let coarse_condition = lu.condition_1norm(&coarse);
        if !(coarse_condition <= MAX_COARSE_CONDITION) {
            return Err(DeflationError::SingularCoarse(coarse_condition));
        }
        Ok(Self { z, az, coarse, lu, numerical_rank, coarse_condition })
    }

    pub fn z(&self) -> &DenseMatrix {
        &self.z
    }

    pub fn az(&self) -> &DenseMatrix {
        &self.az
    }

    /// `Z^H A Z`
    pub fn coarse_matrix(&self) -> &DenseMatrix {
        &self.coarse
    }

    pub fn coarse_lu(&self) -> &DenseLu {
        &self.lu
    }

    pub fn dim(&self) -> usize {
        self.z.nrows()
    }

    pub fn m(&self) -> usize {
        self.z.ncols()
    }

    pub fn numerical_rank(&self) -> usize {
        self.numerical_rank
    }

    /// True when the raw block had fewer independent columns than `m`.
    pub fn rank_deficient(&self) -> bool {
        self.numerical_rank < self.m()
    }

    pub fn coarse_condition(&self) -> f64 {
        self.coarse_condition
    }

    /// `E^{-1} Z^H v`
    pub fn coarse_solve(&self, v: &[C64]) -> Vec<C64> {
        self.lu.solve(&self.z.adjoint_mul_vec(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::krylov::DenseOperator;
    use crate::rng;
    use crate::sparse::SparseMatrix;

    fn c(v: f64) -> C64 {
        C64::new(v, 0.0)
    }

    fn orth_err(z: &DenseMatrix) -> f64 {
        z.adjoint_matmul(z).sub(&DenseMatrix::identity(z.ncols())).frobenius_norm()
    }

    #[test]
    fn orthonormal_input_is_kept_up_to_sign() {
        let a = SparseMatrix::from_diagonal(&[c(1.0), c(2.0), c(3.0), c(4.0)]);
        let mut zr = DenseMatrix::zeros(4, 2);
        zr[(1, 0)] = c(-1.0);
        zr[(3, 1)] = c(1.0);
        let d = build_subspace(&a, &zr).unwrap();
        for j in 0..2 {
            let dot = crate::sparse::vecops::dot(d.z().col(j), zr.col(j));
            assert!((dot.norm() - 1.0).abs() < 1e-15);
        }
        assert!(!d.rank_deficient());
        assert!(d.coarse_matrix().sub(&DenseMatrix::from_diagonal(&[c(2.0), c(4.0)])).frobenius_norm() < 1e-14);
    }

    #[test]
    fn repeated_columns_are_flagged() {
        let a = SparseMatrix::from_diagonal(&[c(1.0), c(2.0), c(3.0)]);
        let v = vec![c(1.0), c(1.0), c(0.0)];
        let zr = DenseMatrix::from_columns(&[v.clone(), v]);
        let d = build_subspace(&a, &zr).unwrap();
        assert!(d.rank_deficient());
        assert_eq!(d.numerical_rank(), 1);
    }

    #[test]
    fn random_block_is_orthonormalized_and_factored() {
        let mut r = rng::stream(1, "test");
        let a = DenseOperator(rng::gaussian_matrix(&mut r, 50, 50));
        let zr = rng::gaussian_matrix(&mut r, 50, 10);
        let d = build_subspace(&a, &zr).unwrap();
        assert!(orth_err(d.z()) <= 1e-12);
        let e = d.z().adjoint_matmul(&a.0.matmul(d.z()));
        let recon = d.coarse_lu().solve_matrix(&e);
        assert!(recon.sub(&DenseMatrix::identity(10)).frobenius_norm() <= 1e-10);
    }

    #[test]
    fn singular_coarse_matrix_is_rejected() {
        let a = SparseMatrix::from_diagonal(&[c(0.0), c(2.0)]);
        let mut zr = DenseMatrix::zeros(2, 1);
        zr[(0, 0)] = c(1.0);
        assert!(matches!(build_subspace(&a, &zr), Err(DeflationError::SingularCoarse(_))));
    }
}
