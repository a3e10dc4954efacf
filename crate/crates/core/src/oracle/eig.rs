use super::{OracleError, Result};
use crate::sparse::dense::{apply_reflector_left, householder_vector};
use crate::sparse::{vecops, DenseMatrix};
use crate::C64;

pub const DEFAULT_DENSE_CAP: usize = 4096;

const MAX_SWEEPS_PER_EIGENVALUE: usize = 60;

#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<C64>,
    /// Unit-norm eigenvectors as columns, in the order of `values`.
    pub vectors: Option<DenseMatrix>,
}

/// Eigenvalues and eigenvectors of a square dense matrix.
///
/// Householder reduction to Hessenberg form followed by single-shift complex
/// QR gives a Schur form `A = Q T Q^H`; eigenvectors come from back
/// substitution on `T`.
pub fn dense_eig(a: &DenseMatrix) -> Result<EigenDecomposition> {
    schur_eig(a, true, DEFAULT_DENSE_CAP)
}

pub fn dense_eigenvalues(a: &DenseMatrix) -> Result<Vec<C64>> {
    Ok(schur_eig(a, false, DEFAULT_DENSE_CAP)?.values)
}

pub(crate) fn schur_eig(a: &DenseMatrix, want_vectors: bool, cap: usize) -> Result<EigenDecomposition> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(OracleError::NotSquare { nrows: n, ncols: a.ncols() });
    }
    if n > cap {
        return Err(OracleError::TooLarge { n, cap });
    }
    if n == 0 {
        return Ok(EigenDecomposition { values: vec![], vectors: want_vectors.then(|| DenseMatrix::zeros(0, 0)) });
    }
    let mut h = a.clone();
    let mut q = want_vectors.then(|| DenseMatrix::identity(n));
    hessenberg(&mut h, q.as_mut());
    schur_qr(&mut h, q.as_mut())?;
    let values: Vec<C64> = (0..n).map(|i| h[(i, i)]).collect();
    let vectors = q.map(|q| {
        let y = triangular_eigenvectors(&h);
        let mut v = q.matmul(&y);
        for j in 0..n {
            let nrm = vecops::norm2(v.col(j));
            if nrm > 0.0 {
                vecops::scale(C64::new(1.0 / nrm, 0.0), v.col_mut(j));
            }
        }
        v
    });
    Ok(EigenDecomposition { values, vectors })
}

/// `A v` for `A <- A H` with the Hermitian reflector `H = I - tau v v^H`, on columns `col0..`.
fn apply_reflector_right(a: &mut DenseMatrix, v: &[C64], col0: usize) {
    let vnorm2: f64 = v.iter().map(|e| e.norm_sqr()).sum();
    if vnorm2 == 0.0 {
        return;
    }
    let tau = 2.0 / vnorm2;
    let mut w = vec![C64::new(0.0, 0.0); a.nrows()];
    for (k, vk) in v.iter().enumerate() {
        vecops::axpy(*vk, a.col(col0 + k), &mut w);
    }
    for (k, vk) in v.iter().enumerate() {
        vecops::axpy(-tau * vk.conj(), &w, a.col_mut(col0 + k));
    }
}

fn hessenberg(h: &mut DenseMatrix, mut q: Option<&mut DenseMatrix>) {
    let n = h.nrows();
    for k in 0..n.saturating_sub(2) {
        let v = householder_vector(&h.col(k)[k + 1..]);
        apply_reflector_left(h, &v, k + 1, k);
        apply_reflector_right(h, &v, k + 1);
        if let Some(q) = q.as_deref_mut() {
            apply_reflector_right(q, &v, k + 1);
        }
        for i in k + 2..n {
            h[(i, k)] = C64::new(0.0, 0.0);
        }
    }
}

/// `(c, s)` with `[c s; -conj(s) c] (a, b)^T = (r, 0)`.
fn givens(a: C64, b: C64) -> (f64, C64) {
    let (na, nb) = (a.norm(), b.norm());
    if nb == 0.0 {
        return (1.0, C64::new(0.0, 0.0));
    }
    if na == 0.0 {
        return (0.0, b.conj() / nb);
    }
    let r = na.hypot(nb);
    (na / r, (a / na) * b.conj() / r)
}

fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mid = (a + d) * 0.5;
    let (l1, l2) = (mid + disc, mid - disc);
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

fn schur_qr(h: &mut DenseMatrix, mut q: Option<&mut DenseMatrix>) -> Result<()> {
    let n = h.nrows();
    let full = q.is_some();
    let eps = f64::EPSILON;
    let hnorm = h.frobenius_norm().max(f64::MIN_POSITIVE);
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    let mut rot: Vec<(f64, C64)> = Vec::with_capacity(n);

    while hi > 0 {
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let mut scale = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            if scale == 0.0 {
                scale = hnorm;
            }
            if sub <= eps * scale {
                h[(lo, lo - 1)] = C64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if total > MAX_SWEEPS_PER_EIGENVALUE * n {
            return Err(OracleError::NoConvergence(total));
        }

        let mu = if iter % 11 == 0 {
            // exceptional shift breaks rare cycling
            h[(hi, hi)] + C64::new(0.75 * h[(hi, hi - 1)].norm(), 0.25 * h[(hi, hi - 1)].norm())
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };

        for k in lo..=hi {
            h[(k, k)] -= mu;
        }
        let col_end = if full { n } else { hi + 1 };
        rot.clear();
        for k in lo..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            rot.push((c, s));
            for j in k..col_end {
                let (x, y) = (h[(k, j)], h[(k + 1, j)]);
                h[(k, j)] = x * c + s * y;
                h[(k + 1, j)] = -s.conj() * x + y * c;
            }
        }
        let row_start = if full { 0 } else { lo };
        for (idx, k) in (lo..hi).enumerate() {
            let (c, s) = rot[idx];
            let row_end = (k + 2).min(hi);
            for i in row_start..=row_end {
                let (x, y) = (h[(i, k)], h[(i, k + 1)]);
                h[(i, k)] = x * c + y * s.conj();
                h[(i, k + 1)] = -x * s + y * c;
            }
            if let Some(q) = q.as_deref_mut() {
                for i in 0..n {
                    let (x, y) = (q[(i, k)], q[(i, k + 1)]);
                    q[(i, k)] = x * c + y * s.conj();
                    q[(i, k + 1)] = -x * s + y * c;
                }
            }
        }
        for k in lo..=hi {
            h[(k, k)] += mu;
        }
    }
    for j in 0..n {
        for i in j + 1..n {
            h[(i, j)] = C64::new(0.0, 0.0);
        }
    }
    Ok(())
}

/// Upper triangular `Y` with `T Y = Y diag(T)` and unit diagonal.
fn triangular_eigenvectors(t: &DenseMatrix) -> DenseMatrix {
    let n = t.nrows();
    let small = f64::EPSILON * t.frobenius_norm().max(f64::MIN_POSITIVE);
    let mut y = DenseMatrix::zeros(n, n);
    let mut rhs = vec![C64::new(0.0, 0.0); n];
    for k in 0..n {
        let lambda = t[(k, k)];
        for i in 0..k {
            rhs[i] = -t[(i, k)];
        }
        let col = y.col_mut(k);
        col[k] = C64::new(1.0, 0.0);
        for j in (0..k).rev() {
            let mut d = t[(j, j)] - lambda;
            if d.norm() < small {
                d = C64::new(small, 0.0);
            }
            let yj = rhs[j] / d;
            col[j] = yj;
            let tcol = t.col(j);
            for i in 0..j {
                rhs[i] -= yj * tcol[i];
            }
        }
        // rescale very large solutions to avoid overflow in V = Q Y
        let m = vecops::norm_inf(&col[..=k]);
        if m > 1e150 {
            vecops::scale(C64::new(1.0 / m, 0.0), &mut col[..=k]);
        }
    }
    y
}
