use super::subspace::DeflationSubspace;
use crate::krylov::LinearOperator;
use crate::sparse::vecops;
use crate::C64;

/// `P = I - AZ E^{-1} Z^H` and `P~ = I - Z E^{-1} Z^H A`, applied matrix-free.
///
/// `P A = A P~`, `P^2 = P`, `P~^2 = P~`.
pub struct ProjectorPair<'a, O: ?Sized> {
    a: &'a O,
    d: &'a DeflationSubspace,
}

impl<O: ?Sized> Clone for ProjectorPair<'_, O> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<O: ?Sized> Copy for ProjectorPair<'_, O> {}

impl<'a, O: LinearOperator + ?Sized> ProjectorPair<'a, O> {
    pub fn new(a: &'a O, d: &'a DeflationSubspace) -> Self {
        assert_eq!(a.dim(), d.dim(), "operator and subspace dimensions differ");
        Self { a, d }
    }

    pub fn subspace(&self) -> &DeflationSubspace {
        self.d
    }

    pub fn operator(&self) -> &O {
        self.a
    }

    pub fn apply_p(&self, v: &[C64]) -> Vec<C64> {
        let w = self.d.coarse_solve(v);
        let mut out = v.to_vec();
        for (k, wk) in w.iter().enumerate() {
            vecops::axpy(-wk, self.d.az().col(k), &mut out);
        }
        out
    }

    /// `P^H v = v - Z E^{-H} (AZ)^H v`
    pub fn apply_p_adjoint(&self, v: &[C64]) -> Vec<C64> {
        let w = self.d.coarse_lu().solve_adjoint(&self.d.az().adjoint_mul_vec(v));
        let mut out = v.to_vec();
        for (k, wk) in w.iter().enumerate() {
            vecops::axpy(-wk, self.d.z().col(k), &mut out);
        }
        out
    }

    pub fn apply_p_tilde(&self, v: &[C64]) -> Vec<C64> {
        let av = self.a.apply_vec(v);
        let mut out = v.to_vec();
        self.subtract_coarse(&av, &mut out);
        out
    }

    /// `Z E^{-1} Z^H v`, the coarse-space solution component.
    pub fn coarse_correction(&self, v: &[C64]) -> Vec<C64> {
        let mut out = vecops::zeros(v.len());
        let w = self.d.coarse_solve(v);
        for (k, wk) in w.iter().enumerate() {
            vecops::axpy(*wk, self.d.z().col(k), &mut out);
        }
        out
    }

    fn subtract_coarse(&self, v: &[C64], out: &mut [C64]) {
        let w = self.d.coarse_solve(v);
        for (k, wk) in w.iter().enumerate() {
            vecops::axpy(-wk, self.d.z().col(k), out);
        }
    }

    /// The singular operator `P A`.
    pub fn deflated_operator(&self) -> DeflatedOperator<'a, O> {
        DeflatedOperator { pair: *self }
    }
}

/// `x -> P A x` with adjoint `A^H P^H`.
#[derive(Clone, Copy)]
pub struct DeflatedOperator<'a, O: ?Sized> {
    pair: ProjectorPair<'a, O>,
}

impl<O: LinearOperator + ?Sized> LinearOperator for DeflatedOperator<'_, O> {
    fn dim(&self) -> usize {
        self.pair.a.dim()
    }

    fn apply(&self, x: &[C64], y: &mut [C64]) {
        let ax = self.pair.a.apply_vec(x);
        y.copy_from_slice(&self.pair.apply_p(&ax));
    }

    fn has_adjoint(&self) -> bool {
        self.pair.a.has_adjoint()
    }

    fn apply_adjoint(&self, x: &[C64], y: &mut [C64]) {
        let px = self.pair.apply_p_adjoint(x);
        self.pair.a.apply_adjoint(&px, y);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deflation::build_subspace;
    use crate::krylov::DenseOperator;
    use crate::rng;
    use crate::sparse::DenseMatrix;
    use proptest::prelude::*;

    fn setup(n: usize, m: usize, seed: u64) -> (DenseOperator, DeflationSubspace, Vec<C64>) {
        let mut r = rng::stream(seed, "projector-test");
        let mut a = rng::gaussian_matrix(&mut r, n, n);
        for i in 0..n {
            a[(i, i)] += C64::new(0.0, 1.0);
        }
        let op = DenseOperator(a);
        let zr = rng::gaussian_matrix(&mut r, n, m);
        let d = build_subspace(&op, &zr).unwrap();
        let v = rng::gaussian_complex_vector(&mut r, n);
        (op, d, v)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn projector_identities(n in 2usize..60, mfrac in 0.05f64..0.9, seed in 0u64..1000) {
            let m = ((n as f64 * mfrac) as usize).clamp(1, n - 1);
            let (op, d, v) = setup(n, m, seed);
            let p = ProjectorPair::new(&op, &d);
            let nv = vecops::norm2(&v);
            let pv = p.apply_p(&v);
            prop_assert!(vecops::norm2(&vecops::sub(&p.apply_p(&pv), &pv)) <= 1e-10 * nv);
            let tv = p.apply_p_tilde(&v);
            prop_assert!(vecops::norm2(&vecops::sub(&p.apply_p_tilde(&tv), &tv)) <= 1e-10 * nv);
            let lhs = p.apply_p(&op.apply_vec(&v));
            let rhs = op.apply_vec(&tv);
            prop_assert!(vecops::norm2(&vecops::sub(&lhs, &rhs)) <= 1e-10 * op.0.frobenius_norm() * nv);
        }
    }

    #[test]
    fn adjoints_are_consistent() {
        let (op, d, v) = setup(25, 4, 3);
        let p = ProjectorPair::new(&op, &d);
        let w: Vec<C64> = v.iter().rev().map(|x| x * C64::new(0.3, -1.0)).collect();
        let lhs = vecops::dot(&p.apply_p(&v), &w);
        let rhs = vecops::dot(&v, &p.apply_p_adjoint(&w));
        assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(1.0));
        let pa = p.deflated_operator();
        let lhs = vecops::dot(&pa.apply_vec(&v), &w);
        let rhs = vecops::dot(&v, &pa.apply_adjoint_vec(&w));
        assert!((lhs - rhs).norm() <= 1e-11 * lhs.norm().max(1.0));
    }

    #[test]
    fn deflated_operator_annihilates_z() {
        let (op, d, _) = setup(20, 3, 9);
        let pa = ProjectorPair::new(&op, &d).deflated_operator();
        for j in 0..3 {
            assert!(vecops::norm2(&pa.apply_vec(d.z().col(j))) <= 1e-12 * op.0.frobenius_norm());
        }
        let _ = DenseMatrix::zeros(1, 1);
    }
}
