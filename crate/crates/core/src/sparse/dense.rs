use std::ops::{Index, IndexMut};

use super::{Result, SparseError};
use crate::sparse::vecops;
use crate::C64;

/// Column-major complex dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    nrows: usize,
    ncols: usize,
    data: Vec<C64>,
}

impl DenseMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self { nrows, ncols, data: vec![C64::new(0.0, 0.0); nrows * ncols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(nrows: usize, ncols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(nrows * ncols);
        for j in 0..ncols {
            for i in 0..nrows {
                data.push(f(i, j));
            }
        }
        Self { nrows, ncols, data }
    }

    /// Wrap column-major storage.
    pub fn from_col_major(nrows: usize, ncols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != nrows * ncols {
            return Err(SparseError::DimensionMismatch { expected: nrows * ncols, found: data.len() });
        }
        Ok(Self { nrows, ncols, data })
    }

    /// Build from row slices of real values. Handy in tests.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        Self::from_fn(nrows, ncols, |i, j| C64::new(rows[i][j], 0.0))
    }

    pub fn from_columns(columns: &[Vec<C64>]) -> Self {
        let nrows = columns.first().map_or(0, |c| c.len());
        let mut data = Vec::with_capacity(nrows * columns.len());
        for c in columns {
            assert_eq!(c.len(), nrows, "ragged columns");
            data.extend_from_slice(c);
        }
        Self { nrows, ncols: columns.len(), data }
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn col(&self, j: usize) -> &[C64] {
        &self.data[j * self.nrows..(j + 1) * self.nrows]
    }

    pub fn col_mut(&mut self, j: usize) -> &mut [C64] {
        &mut self.data[j * self.nrows..(j + 1) * self.nrows]
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|v| v.im == 0.0)
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.ncols, self.nrows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.ncols, self.nrows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.ncols, rhs.nrows, "inner dimensions differ");
        let mut out = Self::zeros(self.nrows, rhs.ncols);
        for j in 0..rhs.ncols {
            let dst = &mut out.data[j * self.nrows..(j + 1) * self.nrows];
            for k in 0..self.ncols {
                let b = rhs[(k, j)];
                if b == C64::new(0.0, 0.0) {
                    continue;
                }
                vecops::axpy(b, self.col(k), dst);
            }
        }
        out
    }

    /// `self^H * rhs` without forming the adjoint.
    pub fn adjoint_matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.nrows, rhs.nrows, "row counts differ");
        Self::from_fn(self.ncols, rhs.ncols, |i, j| vecops::dot(self.col(i), rhs.col(j)))
    }

    pub fn mul_vec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.ncols);
        let mut y = vecops::zeros(self.nrows);
        for (k, &xk) in x.iter().enumerate() {
            vecops::axpy(xk, self.col(k), &mut y);
        }
        y
    }

    /// `self^H x`
    pub fn adjoint_mul_vec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.nrows);
        (0..self.ncols).map(|j| vecops::dot(self.col(j), x)).collect()
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.nrows, self.ncols), (rhs.nrows, rhs.ncols));
        Self {
            nrows: self.nrows,
            ncols: self.ncols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.nrows, self.ncols), (rhs.nrows, rhs.ncols));
        Self {
            nrows: self.nrows,
            ncols: self.ncols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scaled(&self, alpha: C64) -> Self {
        Self { nrows: self.nrows, ncols: self.ncols, data: self.data.iter().map(|v| v * alpha).collect() }
    }

    pub fn frobenius_norm(&self) -> f64 {
        vecops::norm2(&self.data)
    }

    /// Copy of rows `r0..r1`, columns `c0..c1`.
    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        let r0 = rows.start;
        let c0 = cols.start;
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(r0 + i, c0 + j)])
    }

    /// First `k` columns.
    pub fn leading_columns(&self, k: usize) -> Self {
        assert!(k <= self.ncols);
        Self { nrows: self.nrows, ncols: k, data: self.data[..k * self.nrows].to_vec() }
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.nrows);
        for &j in idx {
            data.extend_from_slice(self.col(j));
        }
        Self { nrows: self.nrows, ncols: idx.len(), data }
    }

    /// Maximum absolute column sum.
    pub fn norm_1(&self) -> f64 {
        (0..self.ncols)
            .map(|j| self.col(j).iter().map(|v| v.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.nrows && j < self.ncols);
        &self.data[j * self.nrows + i]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.nrows && j < self.ncols);
        &mut self.data[j * self.nrows + i]
    }
}

/// LU factorization with partial pivoting, `P A = L U`.
#[derive(Debug, Clone)]
pub struct DenseLu {
    lu: DenseMatrix,
    perm: Vec<usize>,
}

impl DenseLu {
    pub fn factor(a: &DenseMatrix) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(SparseError::NotSquare { nrows: n, ncols: a.ncols() });
        }
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[(i, k)].norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pmax == 0.0 {
                return Err(SparseError::Singular(k));
            }
            if p != k {
                perm.swap(p, k);
                for j in 0..n {
                    let tmp = lu[(p, j)];
                    lu[(p, j)] = lu[(k, j)];
                    lu[(k, j)] = tmp;
                }
            }
            let inv = C64::new(1.0, 0.0) / lu[(k, k)];
            for i in k + 1..n {
                lu[(i, k)] *= inv;
            }
            let multipliers = lu.col(k)[k + 1..].to_vec();
            for j in k + 1..n {
                let ukj = lu[(k, j)];
                if ukj == C64::new(0.0, 0.0) {
                    continue;
                }
                vecops::axpy(-ukj, &multipliers, &mut lu.col_mut(j)[k + 1..]);
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn dim(&self) -> usize {
        self.perm.len()
    }

    /// Solve `A x = b` in place.
    pub fn solve_in_place(&self, b: &mut [C64]) {
        let n = self.dim();
        assert_eq!(b.len(), n);
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for k in 0..i {
                s -= self.lu[(i, k)] * x[k];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for k in i + 1..n {
                s -= self.lu[(i, k)] * x[k];
            }
            x[i] = s / self.lu[(i, i)];
        }
        b.copy_from_slice(&x);
    }

    pub fn solve(&self, b: &[C64]) -> Vec<C64> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }

    /// Solve `A^H x = b`.
    pub fn solve_adjoint(&self, b: &[C64]) -> Vec<C64> {
        let n = self.dim();
        assert_eq!(b.len(), n);
        // A^H = U^H L^H P
        let mut w = b.to_vec();
        for i in 0..n {
            let mut s = w[i];
            for k in 0..i {
                s -= self.lu[(k, i)].conj() * w[k];
            }
            w[i] = s / self.lu[(i, i)].conj();
        }
        for i in (0..n).rev() {
            let mut s = w[i];
            for k in i + 1..n {
                s -= self.lu[(k, i)].conj() * w[k];
            }
            w[i] = s;
        }
        let mut x = vecops::zeros(n);
        for (i, &p) in self.perm.iter().enumerate() {
            x[p] = w[i];
        }
        x
    }

    pub fn solve_matrix(&self, b: &DenseMatrix) -> DenseMatrix {
        let cols: Vec<Vec<C64>> = (0..b.ncols()).map(|j| self.solve(b.col(j))).collect();
        DenseMatrix::from_columns(&cols)
    }

    pub fn inverse(&self) -> DenseMatrix {
        self.solve_matrix(&DenseMatrix::identity(self.dim()))
    }

    /// 1-norm condition number computed from the explicit inverse.
    pub fn condition_1norm(&self, a: &DenseMatrix) -> f64 {
        a.norm_1() * self.inverse().norm_1()
    }
}

/// Thin QR factors with the diagonal of `R` real and nonnegative.
#[derive(Debug, Clone)]
pub struct ThinQr {
    pub q: DenseMatrix,
    pub r: DenseMatrix,
}

impl ThinQr {
    /// Number of diagonal entries of `R` above `rel_tol * max |r_jj|`.
    pub fn numerical_rank(&self, rel_tol: f64) -> usize {
        let d: Vec<f64> = (0..self.r.ncols()).map(|j| self.r[(j, j)].re).collect();
        let max = d.iter().cloned().fold(0.0, f64::max);
        d.iter().filter(|&&v| v > rel_tol * max).count()
    }

    pub fn is_rank_deficient(&self, rel_tol: f64) -> bool {
        self.numerical_rank(rel_tol) < self.r.ncols()
    }
}

/// Householder thin QR of an `N x m` matrix with `N >= m`.
pub fn thin_qr(m: &DenseMatrix) -> Result<ThinQr> {
    let (n, k) = (m.nrows(), m.ncols());
    if n < k {
        return Err(SparseError::DimensionMismatch { expected: k, found: n });
    }
    let mut a = m.clone();
    let mut reflectors: Vec<Vec<C64>> = Vec::with_capacity(k);
    for j in 0..k {
        let x = &a.col(j)[j..];
        let v = householder_vector(x);
        apply_reflector_left(&mut a, &v, j, j);
        reflectors.push(v);
    }

    let mut q = DenseMatrix::zeros(n, k);
    for j in 0..k {
        q[(j, j)] = C64::new(1.0, 0.0);
    }
    for j in (0..k).rev() {
        apply_reflector_left(&mut q, &reflectors[j], j, j);
    }

    let mut r = DenseMatrix::zeros(k, k);
    for j in 0..k {
        for i in 0..=j {
            r[(i, j)] = a[(i, j)];
        }
    }
    for j in 0..k {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for c in j..k {
            r[(j, c)] *= phase.conj();
        }
        r[(j, j)] = C64::new(r[(j, j)].re.max(0.0), 0.0);
        vecops::scale(phase, q.col_mut(j));
    }
    Ok(ThinQr { q, r })
}

/// Reflector `v` with `(I - 2 v v^H / v^H v) x = alpha e_1`. A zero vector means identity.
pub(crate) fn householder_vector(x: &[C64]) -> Vec<C64> {
    let norm = vecops::norm2(x);
    let mut v = x.to_vec();
    if norm == 0.0 {
        v.iter_mut().for_each(|e| *e = C64::new(0.0, 0.0));
        return v;
    }
    let x0 = x[0];
    let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { C64::new(1.0, 0.0) };
    v[0] = x0 + phase * norm;
    v
}

/// Apply the reflector to rows `row0..` of columns `col0..`.
pub(crate) fn apply_reflector_left(a: &mut DenseMatrix, v: &[C64], row0: usize, col0: usize) {
    let vnorm2: f64 = v.iter().map(|e| e.norm_sqr()).sum();
    if vnorm2 == 0.0 {
        return;
    }
    let tau = 2.0 / vnorm2;
    for j in col0..a.ncols() {
        let col = &mut a.col_mut(j)[row0..row0 + v.len()];
        let s = vecops::dot(v, col) * tau;
        vecops::axpy(-s, v, col);
    }
}
