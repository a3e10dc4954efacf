use super::{ModelError, Result};
use crate::rng;
use crate::sparse::{thin_qr, DenseMatrix, SparseMatrix};
use crate::C64;

/// `A = V diag(eigenvalues) V^{-1}` with `kappa_2(V) = kappa_v`.
#[derive(Debug, Clone)]
pub struct SyntheticSpec {
    pub eigenvalues: Vec<C64>,
    pub kappa_v: f64,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct SyntheticMatrix {
    pub matrix: SparseMatrix,
    /// Eigenvectors, column `i` belonging to `eigenvalues[i]`.
    pub eigenvectors: DenseMatrix,
    pub eigenvalues: Vec<C64>,
}

/// `V = U S W^T` with `U`, `W` random orthogonal and `S` log-spaced on `[1, kappa_v]`.
/// For `kappa_v = 1` the product reduces to an orthogonal `V` and `A` is normal.
pub fn synthetic_matrix(spec: &SyntheticSpec) -> Result<SyntheticMatrix> {
    let n = spec.eigenvalues.len();
    if n == 0 {
        return Err(ModelError::InvalidSpec("no eigenvalues given".into()));
    }
    if !(spec.kappa_v >= 1.0 && spec.kappa_v.is_finite()) {
        return Err(ModelError::InvalidSpec(format!("conditioning of V must be >= 1, got {}", spec.kappa_v)));
    }
    let mut r = rng::stream(spec.seed, rng::streams::SYNTHETIC);
    let u = thin_qr(&rng::gaussian_matrix(&mut r, n, n)).expect("square").q;
    let w = thin_qr(&rng::gaussian_matrix(&mut r, n, n)).expect("square").q;
    let sigma: Vec<f64> = (0..n)
        .map(|i| if n == 1 { 1.0 } else { spec.kappa_v.powf(i as f64 / (n - 1) as f64) })
        .collect();

    let mut us = u.clone();
    let mut u_over_s = u;
    for (j, &s) in sigma.iter().enumerate() {
        crate::sparse::vecops::scale(C64::new(s, 0.0), us.col_mut(j));
        crate::sparse::vecops::scale(C64::new(1.0 / s, 0.0), u_over_s.col_mut(j));
    }
    let v = us.matmul(&w.transpose());
    let v_inv = w.matmul(&u_over_s.transpose());
    let mut v_lambda = v.clone();
    for (j, &l) in spec.eigenvalues.iter().enumerate() {
        crate::sparse::vecops::scale(l, v_lambda.col_mut(j));
    }
    let a = v_lambda.matmul(&v_inv);
    Ok(SyntheticMatrix { matrix: SparseMatrix::from_dense(&a), eigenvectors: v, eigenvalues: spec.eigenvalues.clone() })
}
