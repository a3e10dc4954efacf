//! Test-side oracles written independently of the library kernels.
#![allow(dead_code)]

use cdefl::{DenseMatrix, SparseMatrix};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn random_complex(r: &mut ChaCha8Rng) -> C64 {
    C64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0))
}

pub fn random_vector(r: &mut ChaCha8Rng, n: usize) -> Vec<C64> {
    (0..n).map(|_| random_complex(r)).collect()
}

pub fn random_dense(r: &mut ChaCha8Rng, rows: usize, cols: usize) -> DenseMatrix {
    DenseMatrix::from_fn(rows, cols, |_, _| random_complex(r))
}

/// Diagonally shifted random matrix, nonsingular with high probability.
pub fn random_nonsingular(r: &mut ChaCha8Rng, n: usize, shift: f64) -> DenseMatrix {
    let mut a = random_dense(r, n, n);
    for i in 0..n {
        a[(i, i)] += shift;
    }
    a
}

pub fn norm(v: &[C64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

pub fn diff_norm(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

/// Plain triple-loop product.
pub fn matmul(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    DenseMatrix::from_fn(a.nrows(), b.ncols(), |i, j| (0..a.ncols()).map(|k| a[(i, k)] * b[(k, j)]).sum())
}

pub fn adjoint(a: &DenseMatrix) -> DenseMatrix {
    DenseMatrix::from_fn(a.ncols(), a.nrows(), |i, j| a[(j, i)].conj())
}

pub fn matvec(a: &DenseMatrix, x: &[C64]) -> Vec<C64> {
    (0..a.nrows()).map(|i| (0..a.ncols()).map(|k| a[(i, k)] * x[k]).sum()).collect()
}

/// Gauss-Jordan inverse with partial pivoting.
pub fn inverse(a: &DenseMatrix) -> DenseMatrix {
    let n = a.nrows();
    let mut m: Vec<Vec<C64>> = (0..n)
        .map(|i| (0..2 * n).map(|j| if j < n { a[(i, j)] } else if j - n == i { c(1.0) } else { c(0.0) }).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| m[x][col].norm().total_cmp(&m[y][col].norm())).unwrap();
        m.swap(col, piv);
        let p = m[col][col];
        assert!(p.norm() > 0.0, "singular");
        for v in m[col].iter_mut() {
            *v /= p;
        }
        for row in 0..n {
            if row != col {
                let f = m[row][col];
                if f.norm() != 0.0 {
                    let pivot_row = m[col].clone();
                    for (v, pv) in m[row].iter_mut().zip(&pivot_row) {
                        *v -= f * pv;
                    }
                }
            }
        }
    }
    DenseMatrix::from_fn(n, n, |i, j| m[i][n + j])
}

/// Orthonormal basis by modified Gram-Schmidt applied twice.
pub fn orthonormalize(a: &DenseMatrix) -> DenseMatrix {
    let mut cols: Vec<Vec<C64>> = (0..a.ncols()).map(|j| a.col(j).to_vec()).collect();
    for j in 0..cols.len() {
        for _ in 0..2 {
            for k in 0..j {
                let h: C64 = cols[k].iter().zip(&cols[j]).map(|(x, y)| x.conj() * y).sum();
                let ck = cols[k].clone();
                for (v, q) in cols[j].iter_mut().zip(&ck) {
                    *v -= h * q;
                }
            }
        }
        let nv = norm(&cols[j]);
        cols[j].iter_mut().for_each(|v| *v /= nv);
    }
    DenseMatrix::from_columns(&cols)
}

/// `||(I - Q Q^H) W||_F` for orthonormal `Q`, `W`; bounds the sine of the
/// largest principal angle from above.
pub fn subspace_gap_frobenius(q: &DenseMatrix, w: &DenseMatrix) -> f64 {
    let qhw = matmul(&adjoint(q), w);
    let proj = matmul(q, &qhw);
    let mut s = 0.0;
    for j in 0..w.ncols() {
        for i in 0..w.nrows() {
            s += (w[(i, j)] - proj[(i, j)]).norm_sqr();
        }
    }
    s.sqrt()
}

/// Symmetric Hausdorff distance between two point sets in the plane.
pub fn hausdorff(a: &[C64], b: &[C64]) -> f64 {
    let one_way = |x: &[C64], y: &[C64]| {
        x.iter().map(|p| y.iter().map(|q| (p - q).norm()).fold(f64::INFINITY, f64::min)).fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

/// Random sparse matrix with `per_row` off-diagonal entries and a dominant diagonal.
pub fn random_sparse(r: &mut ChaCha8Rng, n: usize, per_row: usize, dominance: f64) -> SparseMatrix {
    let mut t = Vec::new();
    for i in 0..n {
        t.push((i, i, C64::new(dominance + r.random_range(0.0..1.0), r.random_range(-0.5..0.5))));
        for _ in 0..per_row {
            let j = r.random_range(0..n);
            if j != i {
                t.push((i, j, random_complex(r)));
            }
        }
    }
    SparseMatrix::from_triplets(n, n, &t).unwrap()
}
