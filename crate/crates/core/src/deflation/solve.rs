use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::projector::ProjectorPair;
use super::subspace::DeflationSubspace;
use super::{DeflationError, Result};
use crate::krylov::{bicg_restarting, gmres, LinearOperator, SolveReport, SolverConfig};
use crate::sparse::vecops;
use crate::C64;

/// `||Pb|| / ||b||` below which the projected solve is skipped.
const NEGLIGIBLE_PB: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum KrylovMethod {
    #[default]
    Bicg,
    Gmres,
}

impl std::str::FromStr for KrylovMethod {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "bicg" => Ok(Self::Bicg),
            "gmres" => Ok(Self::Gmres),
            other => Err(format!("unknown solver {other:?}; expected bicg or gmres")),
        }
    }
}

/// `x* = Z E^{-1} Z^H b + P~ x#` where `x#` solves `P A x = P b` from zero.
///
/// `final_relres` is `||Pb - PAx#|| / ||Pb||` and `true_error` is
/// `||b - A x*|| / ||b||`.
pub fn deflated_solve<O: LinearOperator + ?Sized>(
    a: &O,
    b: &[C64],
    d: &DeflationSubspace,
    cfg: &SolverConfig,
    method: KrylovMethod,
) -> Result<(Vec<C64>, SolveReport)> {
    let start = Instant::now();
    let n = a.dim();
    if b.len() != n || d.dim() != n {
        return Err(DeflationError::DimensionMismatch { expected: n, found: if b.len() != n { b.len() } else { d.dim() } });
    }
    let pair = ProjectorPair::new(a, d);
    let x1 = pair.coarse_correction(b);
    let pb = pair.apply_p(b);
    let bnorm = vecops::norm2(b);

    // b - A x1 = Pb, so a roundoff-sized Pb means x1 already solves the system
    let (x_sharp, mut report) = if vecops::norm2(&pb) <= NEGLIGIBLE_PB * bnorm {
        let mut rep = SolveReport::empty();
        rep.converged = true;
        rep.residual_history = cfg.record_history.then(|| vec![1.0]);
        (vecops::zeros(n), rep)
    } else {
        let pa = pair.deflated_operator();
        let x0 = vecops::zeros(n);
        match method {
            KrylovMethod::Bicg => bicg_restarting(&pa, &pb, &x0, cfg)?,
            KrylovMethod::Gmres => gmres(&pa, &pb, &x0, cfg)?,
        }
    };
    let x2 = pair.apply_p_tilde(&x_sharp);
    let x = vecops::add(&x1, &x2);
    let r = vecops::sub(b, &a.apply_vec(&x));
    report.matvecs += 3;
    report.true_error = Some(if bnorm > 0.0 { vecops::norm2(&r) / bnorm } else { 0.0 });
    report.wall_time = start.elapsed().as_secs_f64();
    Ok((x, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deflation::build_subspace;
    use crate::krylov::DenseOperator;
    use crate::oracle::{dense_eig, dense_eigenvalues};
    use crate::rng;
    use crate::sparse::{thin_qr, DenseMatrix, SparseMatrix};

    fn c(v: f64) -> C64 {
        C64::new(v, 0.0)
    }

    #[test]
    fn full_deflation_is_a_direct_solve() {
        let mut r = rng::stream(2, "t");
        let mut a = rng::gaussian_matrix(&mut r, 8, 8);
        for i in 0..8 {
            a[(i, i)] += c(4.0);
        }
        let op = DenseOperator(a.clone());
        let d = build_subspace(&op, &DenseMatrix::identity(8)).unwrap();
        let b = rng::gaussian_complex_vector(&mut r, 8);
        let (x, rep) = deflated_solve(&op, &b, &d, &SolverConfig::new(1e-10, 50), KrylovMethod::Bicg).unwrap();
        assert_eq!(rep.iterations, 0);
        assert!(rep.converged);
        assert!(rep.true_error.unwrap() <= 1e-13);
        assert!(vecops::norm2(&vecops::sub(&a.mul_vec(&x), &b)) <= 1e-12 * vecops::norm2(&b));
    }

    #[test]
    fn hpd_with_two_eigenvectors() {
        let a = DenseMatrix::from_real_rows(&[
            &[4.0, 1.0, 0.0, 0.0, 0.0],
            &[1.0, 3.0, 0.5, 0.0, 0.0],
            &[0.0, 0.5, 2.0, 0.2, 0.0],
            &[0.0, 0.0, 0.2, 1.0, 0.1],
            &[0.0, 0.0, 0.0, 0.1, 0.3],
        ]);
        let e = dense_eig(&a).unwrap();
        let mut idx: Vec<usize> = (0..5).collect();
        idx.sort_by(|&i, &j| e.values[i].re.total_cmp(&e.values[j].re));
        let v = e.vectors.unwrap();
        let z = v.select_columns(&idx[..2]);
        let op = SparseMatrix::from_dense(&a);
        let d = build_subspace(&op, &z).unwrap();

        let pa = ProjectorPair::new(&op, &d).deflated_operator().to_dense();
        let mut got = dense_eigenvalues(&pa).unwrap();
        got.sort_by(|x, y| x.re.total_cmp(&y.re));
        let mut want = vec![c(0.0), c(0.0)];
        want.extend(idx[2..].iter().map(|&i| e.values[i]));
        want.sort_by(|x, y| x.re.total_cmp(&y.re));
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).norm() <= 1e-8, "{g} vs {w}");
        }

        let b = vec![c(1.0); 5];
        for method in [KrylovMethod::Bicg, KrylovMethod::Gmres] {
            let (x, rep) = deflated_solve(&op, &b, &d, &SolverConfig::new(1e-12, 50), method).unwrap();
            assert!(rep.converged);
            let res = vecops::norm2(&vecops::sub(&a.mul_vec(&x), &b)) / vecops::norm2(&b);
            assert!(res <= 1e-8);
            assert!((res - rep.true_error.unwrap()).abs() < 1e-14);
        }
    }

    #[test]
    fn random_subspace_splitting_is_correct() {
        let mut r = rng::stream(7, "t");
        let n = 40;
        let mut a = rng::gaussian_matrix(&mut r, n, n);
        for i in 0..n {
            a[(i, i)] += c(10.0);
        }
        let op = DenseOperator(a);
        let zr = thin_qr(&rng::gaussian_matrix(&mut r, n, 6)).unwrap().q;
        let d = build_subspace(&op, &zr).unwrap();
        let b = rng::gaussian_complex_vector(&mut r, n);
        let tol = 1e-9;
        for method in [KrylovMethod::Bicg, KrylovMethod::Gmres] {
            let (_, rep) = deflated_solve(&op, &b, &d, &SolverConfig::new(tol, 500), method).unwrap();
            assert!(rep.converged);
            assert!(rep.true_error.unwrap() <= 10.0 * tol);
        }
    }

    #[test]
    fn method_parsing() {
        assert_eq!("gmres".parse::<KrylovMethod>().unwrap(), KrylovMethod::Gmres);
        assert!("cg".parse::<KrylovMethod>().is_err());
    }
}
