//! Restarted GMRES with modified Gram-Schmidt Arnoldi and Givens rotations.

use std::time::Instant;

use super::{check_dims, LinearOperator, Result, SolveReport, SolverConfig};
use crate::sparse::vecops;
use crate::C64;

/// Orthogonality loss (relative to `||w||`) above which a second pass runs.
const REORTH_THRESHOLD: f64 = 1e-8;

/// Complex Givens rotation `[c s; -conj(s) c]` that zeroes `b` in `(a, b)`.
fn givens(a: C64, b: C64) -> (f64, C64) {
    let (na, nb) = (a.norm(), b.norm());
    if nb == 0.0 {
        return (1.0, C64::new(0.0, 0.0));
    }
    if na == 0.0 {
        return (0.0, C64::new(1.0, 0.0) * (b.conj() / nb));
    }
    let rho = na.hypot(nb);
    (na / rho, (a / na) * b.conj() / rho)
}

#[inline]
fn rotate(c: f64, s: C64, x: C64, y: C64) -> (C64, C64) {
    (x * c + s * y, -s.conj() * x + y * c)
}

/// Solve `A x = b` with GMRES(`cfg.restart`), starting from `x0`.
///
/// Each restart cycle minimizes `||b - A x||` over the affine Krylov space of
/// the cycle. The recorded history is the Arnoldi residual estimate, so it is
/// non-increasing inside a cycle. Convergence is always confirmed against a
/// recomputed residual.
pub fn gmres<O: LinearOperator + ?Sized>(
    op: &O,
    b: &[C64],
    x0: &[C64],
    cfg: &SolverConfig,
) -> Result<(Vec<C64>, SolveReport)> {
    cfg.validate()?;
    let n = op.dim();
    check_dims(n, b, x0)?;
    let start = Instant::now();
    let mut report = SolveReport::empty();
    report.converged = false;

    let bnorm = vecops::norm2(b);
    let mut x = x0.to_vec();
    if bnorm == 0.0 {
        x.iter_mut().for_each(|v| *v = C64::new(0.0, 0.0));
        report.converged = true;
        report.residual_history = cfg.record_history.then(|| vec![1.0]);
        report.wall_time = start.elapsed().as_secs_f64();
        return Ok((x, report));
    }

    let mut r = vecops::sub(b, &op.apply_vec(&x));
    report.matvecs += 1;
    let mut beta = vecops::norm2(&r);
    let r0 = beta;
    let mut history = vec![1.0];

    let m = cfg.restart.min(n.max(1));
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(m + 1);
    // Hessenberg columns after rotation; h[k] has k + 2 entries.
    let mut h: Vec<Vec<C64>> = Vec::with_capacity(m);
    let mut rot: Vec<(f64, C64)> = Vec::with_capacity(m);
    let mut w = vecops::zeros(n);

    while beta / bnorm > cfg.tol && report.iterations < cfg.maxit {
        basis.clear();
        h.clear();
        rot.clear();
        let mut v0 = r.clone();
        vecops::scale(C64::new(1.0 / beta, 0.0), &mut v0);
        basis.push(v0);
        let mut g = vec![C64::new(beta, 0.0)];

        let mut k = 0;
        let mut happy = false;
        while k < m && report.iterations < cfg.maxit {
            op.apply(&basis[k], &mut w);
            report.matvecs += 1;
            let mut col = vec![C64::new(0.0, 0.0); k + 2];
            for (i, v) in basis.iter().enumerate() {
                let hik = vecops::dot(v, &w);
                vecops::axpy(-hik, v, &mut w);
                col[i] = hik;
            }
            let mut wnorm = vecops::norm2(&w);
            if wnorm > 0.0 {
                let corr: Vec<C64> = basis.iter().map(|v| vecops::dot(v, &w)).collect();
                let loss = corr.iter().map(|c| c.norm()).fold(0.0, f64::max) / wnorm;
                if loss > REORTH_THRESHOLD {
                    for (i, v) in basis.iter().enumerate() {
                        vecops::axpy(-corr[i], v, &mut w);
                        col[i] += corr[i];
                    }
                    wnorm = vecops::norm2(&w);
                }
            }
            col[k + 1] = C64::new(wnorm, 0.0);

            for (i, &(c, s)) in rot.iter().enumerate() {
                let (a, bb) = rotate(c, s, col[i], col[i + 1]);
                col[i] = a;
                col[i + 1] = bb;
            }
            let (c, s) = givens(col[k], col[k + 1]);
            let (a, _) = rotate(c, s, col[k], col[k + 1]);
            col[k] = a;
            col[k + 1] = C64::new(0.0, 0.0);
            rot.push((c, s));
            let (gk, gk1) = rotate(c, s, g[k], C64::new(0.0, 0.0));
            g[k] = gk;
            g.push(gk1);
            h.push(col);

            report.iterations += 1;
            k += 1;
            let est = gk1.norm();
            history.push(est / r0);

            happy = wnorm <= 1e-14 * h[k - 1][k - 1].norm().max(f64::MIN_POSITIVE);
            if est / bnorm <= cfg.tol || happy {
                break;
            }
            let mut next = w.clone();
            vecops::scale(C64::new(1.0 / wnorm, 0.0), &mut next);
            basis.push(next);
        }

        // back substitution on the rotated Hessenberg system
        let mut y = vec![C64::new(0.0, 0.0); k];
        for i in (0..k).rev() {
            let mut s = g[i];
            for j in i + 1..k {
                s -= h[j][i] * y[j];
            }
            y[i] = if h[i][i].norm() > 0.0 { s / h[i][i] } else { C64::new(0.0, 0.0) };
        }
        for (j, yj) in y.iter().enumerate() {
            vecops::axpy(*yj, &basis[j], &mut x);
        }
        r = vecops::sub(b, &op.apply_vec(&x));
        report.matvecs += 1;
        let new_beta = vecops::norm2(&r);
        // an invariant Krylov space that still misses the target will not improve on restart
        let stalled = happy && new_beta > 0.5 * beta;
        beta = new_beta;
        if stalled {
            break;
        }
    }

    report.final_relres = beta / bnorm;
    report.converged = report.final_relres <= cfg.tol;
    report.residual_history = cfg.record_history.then_some(history);
    report.wall_time = start.elapsed().as_secs_f64();
    Ok((x, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::krylov::{IdentityOperator, KrylovError};
    use crate::sparse::{DenseMatrix, SparseMatrix};

    fn c(v: f64) -> C64 {
        C64::new(v, 0.0)
    }

    #[test]
    fn identity_converges_in_one_iteration() {
        let b = vec![c(1.0), C64::new(-2.0, 1.0), c(0.5)];
        let cfg = SolverConfig::new(1e-12, 10).with_history();
        let (x, rep) = gmres(&IdentityOperator(3), &b, &vecops::zeros(3), &cfg).unwrap();
        assert_eq!(rep.iterations, 1);
        assert!(rep.converged);
        assert!(vecops::norm2(&vecops::sub(&x, &b)) < 1e-14);
        assert_eq!(rep.residual_history.unwrap().len(), 2);
    }

    #[test]
    fn diagonal_finite_termination() {
        let a = SparseMatrix::from_diagonal(&[c(1.0), c(2.0), c(3.0), c(4.0), c(5.0)]);
        let cfg = SolverConfig::new(1e-12, 50).with_restart(5);
        let (x, rep) = gmres(&a, &vecops::ones(5), &vecops::zeros(5), &cfg).unwrap();
        assert!(rep.converged);
        assert!(rep.iterations <= 5, "{}", rep.iterations);
        for (i, xi) in x.iter().enumerate() {
            assert!((xi - c(1.0 / (i + 1) as f64)).norm() < 1e-10);
        }
    }

    #[test]
    fn history_monotone_within_cycle_and_final_residual_is_true() {
        let n = 40;
        let a = DenseMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(2.0 + i as f64 / n as f64, 0.3)
            } else {
                C64::new(((i * 7 + j * 3) % 11) as f64 / 40.0 - 0.12, 0.0)
            }
        });
        let op = crate::krylov::DenseOperator(a.clone());
        let b: Vec<C64> = (0..n).map(|i| C64::new((i as f64).sin(), (i as f64).cos())).collect();
        let cfg = SolverConfig::new(1e-7, 200).with_restart(8).with_history();
        let (x, rep) = gmres(&op, &b, &vecops::zeros(n), &cfg).unwrap();
        assert!(rep.converged);
        let hist = rep.residual_history.as_ref().unwrap();
        assert_eq!(hist.len(), rep.iterations + 1);
        assert_eq!(hist[0], 1.0);
        for cycle in hist[1..].chunks(8) {
            for w in cycle.windows(2) {
                assert!(w[1] <= w[0] * (1.0 + 1e-12));
            }
        }
        let true_res = vecops::norm2(&vecops::sub(&b, &a.mul_vec(&x))) / vecops::norm2(&b);
        assert!((true_res - rep.final_relres).abs() < 1e-12);
    }

    #[test]
    fn maxit_returns_unconverged() {
        let a = SparseMatrix::from_diagonal(&(1..=30).map(|i| c(i as f64)).collect::<Vec<_>>());
        let cfg = SolverConfig::new(1e-14, 3).with_restart(2);
        let (_, rep) = gmres(&a, &vecops::ones(30), &vecops::zeros(30), &cfg).unwrap();
        assert!(!rep.converged);
        assert_eq!(rep.iterations, 3);
    }

    #[test]
    fn zero_rhs_and_bad_dims() {
        let (x, rep) = gmres(&IdentityOperator(2), &vecops::zeros(2), &vecops::ones(2), &SolverConfig::default()).unwrap();
        assert!(rep.converged);
        assert_eq!(x, vecops::zeros(2));
        let err = gmres(&IdentityOperator(2), &vecops::zeros(3), &vecops::zeros(2), &SolverConfig::default());
        assert!(matches!(err, Err(KrylovError::DimensionMismatch { .. })));
    }
}
