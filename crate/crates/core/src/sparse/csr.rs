use super::{DenseMatrix, Result, SparseError};
use crate::C64;

/// Complex matrix in compressed sparse row form.
///
/// Column indices are strictly increasing inside each row. The structure is
/// immutable once built, so a matrix can be shared read-only across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<C64>,
}

impl SparseMatrix {
    /// Build from raw CSR arrays, validating the structure.
    pub fn new(
        nrows: usize,
        ncols: usize,
        row_ptr: Vec<usize>,
        col_idx: Vec<usize>,
        values: Vec<C64>,
    ) -> Result<Self> {
        if row_ptr.len() != nrows + 1 {
            return Err(SparseError::InvalidStructure(format!(
                "row_ptr has length {}, expected {}",
                row_ptr.len(),
                nrows + 1
            )));
        }
        if row_ptr[0] != 0 || row_ptr[nrows] != values.len() || col_idx.len() != values.len() {
            return Err(SparseError::InvalidStructure(
                "row_ptr endpoints disagree with stored entries".into(),
            ));
        }
        for i in 0..nrows {
            if row_ptr[i] > row_ptr[i + 1] {
                return Err(SparseError::InvalidStructure(format!(
                    "row_ptr decreases at row {i}"
                )));
            }
            let cols = &col_idx[row_ptr[i]..row_ptr[i + 1]];
            if cols.windows(2).any(|w| w[0] >= w[1]) {
                return Err(SparseError::InvalidStructure(format!(
                    "column indices of row {i} are not strictly increasing"
                )));
            }
            if let Some(&c) = cols.last() {
                if c >= ncols {
                    return Err(SparseError::IndexOutOfBounds { row: i, col: c, nrows, ncols });
                }
            }
        }
        Ok(Self { nrows, ncols, row_ptr, col_idx, values })
    }

    /// Assemble from coordinate triplets; duplicates are summed.
    pub fn from_triplets(nrows: usize, ncols: usize, triplets: &[(usize, usize, C64)]) -> Result<Self> {
        let mut counts = vec![0usize; nrows + 1];
        for &(r, c, _) in triplets {
            if r >= nrows || c >= ncols {
                return Err(SparseError::IndexOutOfBounds { row: r, col: c, nrows, ncols });
            }
            counts[r + 1] += 1;
        }
        for i in 0..nrows {
            counts[i + 1] += counts[i];
        }
        let mut next = counts.clone();
        let mut cols = vec![0usize; triplets.len()];
        let mut vals = vec![C64::new(0.0, 0.0); triplets.len()];
        for &(r, c, v) in triplets {
            cols[next[r]] = c;
            vals[next[r]] = v;
            next[r] += 1;
        }

        let mut row_ptr = Vec::with_capacity(nrows + 1);
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values = Vec::with_capacity(triplets.len());
        row_ptr.push(0);
        let mut scratch: Vec<(usize, C64)> = Vec::new();
        for i in 0..nrows {
            scratch.clear();
            scratch.extend((counts[i]..counts[i + 1]).map(|k| (cols[k], vals[k])));
            scratch.sort_by_key(|e| e.0);
            for &(c, v) in &scratch {
                if col_idx.len() > row_ptr[i] && *col_idx.last().unwrap() == c {
                    *values.last_mut().unwrap() += v;
                } else {
                    col_idx.push(c);
                    values.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Ok(Self { nrows, ncols, row_ptr, col_idx, values })
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagonal(&vec![C64::new(1.0, 0.0); n])
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let n = diag.len();
        Self {
            nrows: n,
            ncols: n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: diag.to_vec(),
        }
    }

    /// Store every nonzero of a dense matrix.
    pub fn from_dense(a: &DenseMatrix) -> Self {
        let mut row_ptr = vec![0];
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        for i in 0..a.nrows() {
            for j in 0..a.ncols() {
                let v = a[(i, j)];
                if v != C64::new(0.0, 0.0) {
                    col_idx.push(j);
                    values.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Self { nrows: a.nrows(), ncols: a.ncols(), row_ptr, col_idx, values }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.nrows, self.ncols);
        for i in 0..self.nrows {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                d[(i, self.col_idx[k])] += self.values[k];
            }
        }
        d
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[C64]) {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.col_idx[r.clone()], &self.values[r])
    }

    /// Stored value at `(i, j)`, zero when not in the pattern.
    pub fn get(&self, i: usize, j: usize) -> C64 {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&j) {
            Ok(k) => vals[k],
            Err(_) => C64::new(0.0, 0.0),
        }
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.nrows.min(self.ncols)).map(|i| self.get(i, i)).collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.nrows)
            .map(|i| self.row(i).1.iter().map(|v| v.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// `y = A x`
    pub fn matvec(&self, x: &[C64]) -> Result<Vec<C64>> {
        self.check_len(x.len(), self.ncols)?;
        let mut y = vec![C64::new(0.0, 0.0); self.nrows];
        self.matvec_into(x, &mut y);
        Ok(y)
    }

    /// `y = A x` into a caller buffer. Lengths must already agree.
    pub fn matvec_into(&self, x: &[C64], y: &mut [C64]) {
        assert_eq!(x.len(), self.ncols);
        assert_eq!(y.len(), self.nrows);
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.values[k] * x[self.col_idx[k]];
            }
            *yi = acc;
        }
    }

    /// `y = A^H x`
    pub fn matvec_adjoint(&self, x: &[C64]) -> Result<Vec<C64>> {
        self.check_len(x.len(), self.nrows)?;
        let mut y = vec![C64::new(0.0, 0.0); self.ncols];
        self.matvec_adjoint_into(x, &mut y);
        Ok(y)
    }

    /// `y = A^H x` by scattering rows, without forming the transpose.
    pub fn matvec_adjoint_into(&self, x: &[C64], y: &mut [C64]) {
        assert_eq!(x.len(), self.nrows);
        assert_eq!(y.len(), self.ncols);
        y.iter_mut().for_each(|v| *v = C64::new(0.0, 0.0));
        for (i, xi) in x.iter().enumerate() {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                y[self.col_idx[k]] += self.values[k].conj() * xi;
            }
        }
    }

    /// `zI - A`, inserting diagonal entries that are not stored in `A`.
    pub fn shifted(&self, z: C64) -> Result<Self> {
        if !self.is_square() {
            return Err(SparseError::NotSquare { nrows: self.nrows, ncols: self.ncols });
        }
        let n = self.nrows;
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col_idx = Vec::with_capacity(self.nnz() + n);
        let mut values = Vec::with_capacity(self.nnz() + n);
        row_ptr.push(0);
        for i in 0..n {
            let (cols, vals) = self.row(i);
            let mut placed = false;
            for (&c, &v) in cols.iter().zip(vals) {
                if !placed && c > i {
                    col_idx.push(i);
                    values.push(z);
                    placed = true;
                }
                if c == i {
                    col_idx.push(c);
                    values.push(z - v);
                    placed = true;
                } else {
                    col_idx.push(c);
                    values.push(-v);
                }
            }
            if !placed {
                col_idx.push(i);
                values.push(z);
            }
            row_ptr.push(col_idx.len());
        }
        Ok(Self { nrows: n, ncols: n, row_ptr, col_idx, values })
    }

    pub fn transpose(&self) -> Self {
        self.transpose_map(|v| v)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        self.transpose_map(|v| v.conj())
    }

    fn transpose_map(&self, f: impl Fn(C64) -> C64) -> Self {
        let mut counts = vec![0usize; self.ncols + 1];
        for &c in &self.col_idx {
            counts[c + 1] += 1;
        }
        for j in 0..self.ncols {
            counts[j + 1] += counts[j];
        }
        let mut next = counts.clone();
        let mut col_idx = vec![0usize; self.nnz()];
        let mut values = vec![C64::new(0.0, 0.0); self.nnz()];
        for i in 0..self.nrows {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                let c = self.col_idx[k];
                col_idx[next[c]] = i;
                values[next[c]] = f(self.values[k]);
                next[c] += 1;
            }
        }
        Self { nrows: self.ncols, ncols: self.nrows, row_ptr: counts, col_idx, values }
    }

    /// Row `i` of the result is row `perm[i]` of `self`.
    pub fn permute_rows(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.nrows);
        let mut row_ptr = vec![0];
        let mut col_idx = Vec::with_capacity(self.nnz());
        let mut values = Vec::with_capacity(self.nnz());
        for &src in perm {
            let (c, v) = self.row(src);
            col_idx.extend_from_slice(c);
            values.extend_from_slice(v);
            row_ptr.push(col_idx.len());
        }
        Self { nrows: self.nrows, ncols: self.ncols, row_ptr, col_idx, values }
    }

    /// Scalar multiple.
    pub fn scaled(&self, alpha: C64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= alpha);
        out
    }

    fn check_len(&self, found: usize, expected: usize) -> Result<()> {
        if found != expected {
            return Err(SparseError::DimensionMismatch { expected, found });
        }
        Ok(())
    }
}
