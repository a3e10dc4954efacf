use super::{PrecondError, Result};
use crate::krylov::LinearOperator;
use crate::sparse::{vecops, SparseMatrix};
use crate::C64;

/// Relative size below which a U diagonal counts as zero and is replaced by 1.
pub const PIVOT_PATCH_TOL: f64 = 1e-14;

/// `P A ≈ L U` with `L` unit lower triangular, `U` upper triangular, and the
/// pattern of `L + U` contained in the pattern of `P A` plus the diagonal.
///
/// `perm[i]` is the row of `A` that becomes row `i` of `P A`.
#[derive(Debug, Clone)]
pub struct Ilu0Factor {
    l: SparseMatrix,
    u: SparseMatrix,
    perm: Vec<usize>,
    patched: usize,
}

/// Incomplete LU with zero fill-in.
///
/// With `pivot` set, rows are first permuted by a static greedy choice: each
/// column in turn claims the unassigned row holding its largest entry.
pub fn ilu0(a: &SparseMatrix, pivot: bool) -> Result<Ilu0Factor> {
    if !a.is_square() {
        return Err(PrecondError::NotSquare { nrows: a.nrows(), ncols: a.ncols() });
    }
    let n = a.nrows();
    for i in 0..n {
        if a.row(i).0.is_empty() {
            return Err(PrecondError::EmptyRow(i));
        }
    }
    let perm = if pivot { greedy_row_permutation(a) } else { (0..n).collect() };

    let mut l_rows: Vec<(Vec<usize>, Vec<C64>)> = Vec::with_capacity(n);
    let mut u_rows: Vec<(Vec<usize>, Vec<C64>)> = Vec::with_capacity(n);
    let mut work = vec![C64::new(0.0, 0.0); n];
    let mut in_pattern = vec![false; n];
    let mut patched = 0;

    for i in 0..n {
        let (cols, vals) = a.row(perm[i]);
        let mut pattern: Vec<usize> = cols.to_vec();
        if cols.binary_search(&i).is_err() {
            pattern.push(i);
            pattern.sort_unstable();
        }
        for &j in &pattern {
            in_pattern[j] = true;
        }
        for (&j, &v) in cols.iter().zip(vals) {
            work[j] = v;
        }

        for &k in pattern.iter().take_while(|&&k| k < i) {
            let (uc, uv) = &u_rows[k];
            // uc[0] == k is the pivot of row k
            let lik = work[k] / uv[0];
            work[k] = lik;
            for (&j, &ukj) in uc.iter().zip(uv).skip(1) {
                if in_pattern[j] {
                    work[j] -= lik * ukj;
                }
            }
        }

        let split = pattern.partition_point(|&j| j < i);
        let mut lc: Vec<usize> = pattern[..split].to_vec();
        let mut lv: Vec<C64> = lc.iter().map(|&j| work[j]).collect();
        lc.push(i);
        lv.push(C64::new(1.0, 0.0));
        let uc: Vec<usize> = pattern[split..].to_vec();
        let mut uv: Vec<C64> = uc.iter().map(|&j| work[j]).collect();
        let row_max = uv.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if !(uv[0].norm() >= PIVOT_PATCH_TOL * row_max) || uv[0].norm() == 0.0 {
            uv[0] = C64::new(1.0, 0.0);
            patched += 1;
        }

        for &j in &pattern {
            in_pattern[j] = false;
            work[j] = C64::new(0.0, 0.0);
        }
        l_rows.push((lc, lv));
        u_rows.push((uc, uv));
    }

    Ok(Ilu0Factor { l: assemble(n, l_rows), u: assemble(n, u_rows), perm, patched })
}

fn assemble(n: usize, rows: Vec<(Vec<usize>, Vec<C64>)>) -> SparseMatrix {
    let mut row_ptr = Vec::with_capacity(n + 1);
    row_ptr.push(0);
    let mut col_idx = Vec::new();
    let mut values = Vec::new();
    for (c, v) in rows {
        col_idx.extend(c);
        values.extend(v);
        row_ptr.push(col_idx.len());
    }
    SparseMatrix::new(n, n, row_ptr, col_idx, values).expect("factor rows are sorted and in range")
}

fn greedy_row_permutation(a: &SparseMatrix) -> Vec<usize> {
    let n = a.nrows();
    let at = a.transpose();
    let mut taken = vec![false; n];
    let mut perm = vec![usize::MAX; n];
    let mut next_free = 0;
    for j in 0..n {
        let (rows, vals) = at.row(j);
        let best = rows
            .iter()
            .zip(vals)
            .filter(|(&i, v)| !taken[i] && v.norm() > 0.0)
            .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()).then(y.0.cmp(x.0)))
            .map(|(&i, _)| i);
        let i = match best {
            Some(i) => i,
            None => {
                while taken[next_free] {
                    next_free += 1;
                }
                next_free
            }
        };
        taken[i] = true;
        perm[j] = i;
    }
    perm
}

impl Ilu0Factor {
    pub fn l(&self) -> &SparseMatrix {
        &self.l
    }

    pub fn u(&self) -> &SparseMatrix {
        &self.u
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    /// Number of U diagonals replaced by 1.
    pub fn patched_pivots(&self) -> usize {
        self.patched
    }

    pub fn dim(&self) -> usize {
        self.l.nrows()
    }

    /// `(P v)[i] = v[perm[i]]`
    pub fn permute(&self, v: &[C64]) -> Vec<C64> {
        self.perm.iter().map(|&p| v[p]).collect()
    }

    /// `P^T v`
    pub fn permute_transpose(&self, v: &[C64]) -> Vec<C64> {
        let mut out = vecops::zeros(v.len());
        for (i, &p) in self.perm.iter().enumerate() {
            out[p] = v[i];
        }
        out
    }

    /// `L^{-1} v` in place; L has unit diagonal stored last in each row.
    pub fn solve_l(&self, v: &mut [C64]) {
        for i in 0..v.len() {
            let (c, x) = self.l.row(i);
            let mut s = v[i];
            for (&j, &lij) in c.iter().zip(x).filter(|(&j, _)| j < i) {
                s -= lij * v[j];
            }
            v[i] = s;
        }
    }

    /// `U^{-1} v` in place; U has its diagonal stored first in each row.
    pub fn solve_u(&self, v: &mut [C64]) {
        for i in (0..v.len()).rev() {
            let (c, x) = self.u.row(i);
            let mut s = v[i];
            for (&j, &uij) in c.iter().zip(x).skip(1) {
                s -= uij * v[j];
            }
            v[i] = s / x[0];
        }
    }

    /// `L^{-H} v` in place, by column-oriented traversal of the rows of L.
    pub fn solve_l_adjoint(&self, v: &mut [C64]) {
        for i in (0..v.len()).rev() {
            let (c, x) = self.l.row(i);
            let wi = v[i];
            for (&k, &lik) in c.iter().zip(x).filter(|(&k, _)| k < i) {
                v[k] -= lik.conj() * wi;
            }
        }
    }

    /// `U^{-H} v` in place.
    pub fn solve_u_adjoint(&self, v: &mut [C64]) {
        for i in 0..v.len() {
            let (c, x) = self.u.row(i);
            let wi = v[i] / x[0].conj();
            v[i] = wi;
            for (&j, &uij) in c.iter().zip(x).skip(1) {
                v[j] -= uij.conj() * wi;
            }
        }
    }

    /// `b -> L^{-1} P b`
    pub fn transform_rhs(&self, b: &[C64]) -> Vec<C64> {
        let mut v = self.permute(b);
        self.solve_l(&mut v);
        v
    }

    /// `u -> U^{-1} u`, undoing the substitution `u = U x`.
    pub fn recover_solution(&self, u: &[C64]) -> Vec<C64> {
        let mut v = u.to_vec();
        self.solve_u(&mut v);
        v
    }

    /// The preconditioned operator `L^{-1} P A U^{-1}`.
    pub fn operator<'a>(&'a self, a: &'a SparseMatrix) -> Result<Ilu0Operator<'a>> {
        if a.nrows() != self.dim() || !a.is_square() {
            return Err(PrecondError::DimensionMismatch { expected: self.dim(), found: a.nrows() });
        }
        Ok(Ilu0Operator { a, f: self })
    }
}

/// `x -> L^{-1} P A U^{-1} x` with adjoint `U^{-H} A^H P^T L^{-H}`.
#[derive(Debug, Clone, Copy)]
pub struct Ilu0Operator<'a> {
    a: &'a SparseMatrix,
    f: &'a Ilu0Factor,
}

impl Ilu0Operator<'_> {
    pub fn factor(&self) -> &Ilu0Factor {
        self.f
    }

    pub fn matrix(&self) -> &SparseMatrix {
        self.a
    }
}

impl LinearOperator for Ilu0Operator<'_> {
    fn dim(&self) -> usize {
        self.a.nrows()
    }

    fn apply(&self, x: &[C64], y: &mut [C64]) {
        let mut t = x.to_vec();
        self.f.solve_u(&mut t);
        let at = self.a.matvec(&t).expect("dimension checked at construction");
        y.copy_from_slice(&self.f.permute(&at));
        self.f.solve_l(y);
    }

    fn has_adjoint(&self) -> bool {
        true
    }

    fn apply_adjoint(&self, x: &[C64], y: &mut [C64]) {
        let mut t = x.to_vec();
        self.f.solve_l_adjoint(&mut t);
        let t = self.f.permute_transpose(&t);
        self.a.matvec_adjoint_into(&t, y);
        self.f.solve_u_adjoint(y);
    }

    fn is_real(&self) -> bool {
        self.a.is_real() && self.f.l.is_real() && self.f.u.is_real()
    }
}
