use crate::sparse::{DenseMatrix, SparseMatrix};
use crate::C64;

/// A square linear map `x -> A x` applied matrix-free.
///
/// Implementations must be linear and thread-safe for concurrent reads.
pub trait LinearOperator: Send + Sync {
    fn dim(&self) -> usize;

    /// `y = A x`; both slices have length `dim()`.
    fn apply(&self, x: &[C64], y: &mut [C64]);

    fn has_adjoint(&self) -> bool {
        false
    }

    /// `y = A^H x`. Only called when `has_adjoint()` is true.
    fn apply_adjoint(&self, _x: &[C64], _y: &mut [C64]) {
        panic!("operator has no adjoint");
    }

    /// True when the operator maps real vectors to real vectors.
    fn is_real(&self) -> bool {
        false
    }

    /// Convenience allocation wrapper around [`apply`](Self::apply).
    fn apply_vec(&self, x: &[C64]) -> Vec<C64> {
        let mut y = vec![C64::new(0.0, 0.0); self.dim()];
        self.apply(x, &mut y);
        y
    }

    fn apply_adjoint_vec(&self, x: &[C64]) -> Vec<C64> {
        let mut y = vec![C64::new(0.0, 0.0); self.dim()];
        self.apply_adjoint(x, &mut y);
        y
    }

    /// Dense expansion by applying the operator to unit vectors.
    fn to_dense(&self) -> DenseMatrix {
        let n = self.dim();
        let mut out = DenseMatrix::zeros(n, n);
        let mut e = vec![C64::new(0.0, 0.0); n];
        for j in 0..n {
            e[j] = C64::new(1.0, 0.0);
            self.apply(&e, out.col_mut(j));
            e[j] = C64::new(0.0, 0.0);
        }
        out
    }
}

impl<T: LinearOperator + ?Sized> LinearOperator for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn apply(&self, x: &[C64], y: &mut [C64]) {
        (**self).apply(x, y)
    }
    fn has_adjoint(&self) -> bool {
        (**self).has_adjoint()
    }
    fn apply_adjoint(&self, x: &[C64], y: &mut [C64]) {
        (**self).apply_adjoint(x, y)
    }
    fn is_real(&self) -> bool {
        (**self).is_real()
    }
    fn to_dense(&self) -> DenseMatrix {
        (**self).to_dense()
    }
}

impl LinearOperator for SparseMatrix {
    fn dim(&self) -> usize {
        assert!(self.is_square(), "operator must be square");
        self.nrows()
    }
    fn apply(&self, x: &[C64], y: &mut [C64]) {
        self.matvec_into(x, y)
    }
    fn has_adjoint(&self) -> bool {
        true
    }
    fn apply_adjoint(&self, x: &[C64], y: &mut [C64]) {
        self.matvec_adjoint_into(x, y)
    }
    fn is_real(&self) -> bool {
        SparseMatrix::is_real(self)
    }
    fn to_dense(&self) -> DenseMatrix {
        SparseMatrix::to_dense(self)
    }
}

/// Dense matrix viewed as an operator.
#[derive(Debug, Clone)]
pub struct DenseOperator(pub DenseMatrix);

impl LinearOperator for DenseOperator {
    fn dim(&self) -> usize {
        self.0.nrows()
    }
    fn apply(&self, x: &[C64], y: &mut [C64]) {
        y.copy_from_slice(&self.0.mul_vec(x));
    }
    fn has_adjoint(&self) -> bool {
        true
    }
    fn apply_adjoint(&self, x: &[C64], y: &mut [C64]) {
        y.copy_from_slice(&self.0.adjoint_mul_vec(x));
    }
    fn is_real(&self) -> bool {
        self.0.is_real()
    }
    fn to_dense(&self) -> DenseMatrix {
        self.0.clone()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct IdentityOperator(pub usize);

impl LinearOperator for IdentityOperator {
    fn dim(&self) -> usize {
        self.0
    }
    fn apply(&self, x: &[C64], y: &mut [C64]) {
        y.copy_from_slice(x)
    }
    fn has_adjoint(&self) -> bool {
        true
    }
    fn apply_adjoint(&self, x: &[C64], y: &mut [C64]) {
        y.copy_from_slice(x)
    }
    fn is_real(&self) -> bool {
        true
    }
}

/// `zI - A` for an arbitrary operator `A`.
pub struct ShiftedOperator<'a, O: LinearOperator + ?Sized> {
    pub inner: &'a O,
    pub shift: C64,
}

impl<'a, O: LinearOperator + ?Sized> ShiftedOperator<'a, O> {
    pub fn new(inner: &'a O, shift: C64) -> Self {
        Self { inner, shift }
    }
}

impl<O: LinearOperator + ?Sized> LinearOperator for ShiftedOperator<'_, O> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn apply(&self, x: &[C64], y: &mut [C64]) {
        self.inner.apply(x, y);
        for (yi, xi) in y.iter_mut().zip(x) {
            *yi = self.shift * xi - *yi;
        }
    }
    fn has_adjoint(&self) -> bool {
        self.inner.has_adjoint()
    }
    fn apply_adjoint(&self, x: &[C64], y: &mut [C64]) {
        self.inner.apply_adjoint(x, y);
        let s = self.shift.conj();
        for (yi, xi) in y.iter_mut().zip(x) {
            *yi = s * xi - *yi;
        }
    }
    fn is_real(&self) -> bool {
        self.shift.im == 0.0 && self.inner.is_real()
    }
}
