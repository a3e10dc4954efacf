//! Biconjugate gradients for general (non-Hermitian) systems.

use std::time::Instant;

use super::{check_dims, KrylovError, LinearOperator, Result, SolveReport, SolverConfig};
use crate::rng;
use crate::sparse::vecops;
use crate::C64;

/// `|rho|` or `|p~^H A p|` below this fraction of the product of norms is a breakdown.
const BREAKDOWN_TOL: f64 = 1e-15;

/// BiCG with the shadow residual `conj(r0)`.
///
/// One iteration costs one product with `A` and one with `A^H`. On breakdown
/// the report carries `breakdowns == 1` and the best iterate seen so far.
pub fn bicg<O: LinearOperator + ?Sized>(
    op: &O,
    b: &[C64],
    x0: &[C64],
    cfg: &SolverConfig,
) -> Result<(Vec<C64>, SolveReport)> {
    bicg_with_shadow(op, b, x0, None, cfg)
}

/// BiCG with an explicit shadow residual (`None` selects `conj(r0)`).
pub fn bicg_with_shadow<O: LinearOperator + ?Sized>(
    op: &O,
    b: &[C64],
    x0: &[C64],
    shadow: Option<&[C64]>,
    cfg: &SolverConfig,
) -> Result<(Vec<C64>, SolveReport)> {
    let start = Instant::now();
    let (x, mut report) = run(op, b, x0, shadow, cfg, cfg.maxit, 1.0)?;
    report.wall_time = start.elapsed().as_secs_f64();
    Ok((x, report))
}

/// BiCG that restarts after a breakdown from the best iterate, with a fresh
/// random shadow residual drawn from `cfg.seed`, until `cfg.maxit` iterations
/// have been spent in total.
pub fn bicg_restarting<O: LinearOperator + ?Sized>(
    op: &O,
    b: &[C64],
    x0: &[C64],
    cfg: &SolverConfig,
) -> Result<(Vec<C64>, SolveReport)> {
    let start = Instant::now();
    let mut shadow_rng = rng::stream(cfg.seed, rng::streams::BICG_SHADOW);
    let (mut x, mut total) = run(op, b, x0, None, cfg, cfg.maxit, 1.0)?;
    while !total.converged && total.breakdowns > 0 && total.iterations < cfg.maxit {
        let shadow = rng::gaussian_complex_vector(&mut shadow_rng, op.dim());
        let r0_scale = total.final_relres * vecops::norm2(b);
        let r0_ratio = match &total.residual_history {
            Some(h) if !h.is_empty() => r0_scale / (vecops::norm2(b) * h[0]).max(f64::MIN_POSITIVE),
            _ => 1.0,
        };
        let (xn, rep) = run(op, b, &x, Some(&shadow), cfg, cfg.maxit - total.iterations, r0_ratio)?;
        x = xn;
        total.iterations += rep.iterations;
        total.matvecs += rep.matvecs;
        total.breakdowns += rep.breakdowns;
        total.converged = rep.converged;
        total.final_relres = rep.final_relres;
        if let (Some(h), Some(new)) = (total.residual_history.as_mut(), rep.residual_history) {
            h.extend_from_slice(&new[1..]);
        }
        if rep.breakdowns == 0 || rep.iterations == 0 {
            break;
        }
    }
    total.wall_time = start.elapsed().as_secs_f64();
    Ok((x, total))
}

/// Core iteration. `hist_scale` rescales the recorded history so restarted
/// runs stay relative to the very first residual.
fn run<O: LinearOperator + ?Sized>(
    op: &O,
    b: &[C64],
    x0: &[C64],
    shadow: Option<&[C64]>,
    cfg: &SolverConfig,
    maxit: usize,
    hist_scale: f64,
) -> Result<(Vec<C64>, SolveReport)> {
    cfg.validate()?;
    if !op.has_adjoint() {
        return Err(KrylovError::AdjointUnavailable);
    }
    let n = op.dim();
    check_dims(n, b, x0)?;
    if let Some(s) = shadow {
        check_dims(n, b, s)?;
    }
    let mut report = SolveReport::empty();
    report.converged = false;
    let bnorm = vecops::norm2(b);
    if bnorm == 0.0 {
        report.converged = true;
        report.residual_history = cfg.record_history.then(|| vec![1.0]);
        return Ok((vecops::zeros(n), report));
    }

    let mut x = x0.to_vec();
    let mut r = vecops::sub(b, &op.apply_vec(&x));
    report.matvecs += 1;
    let r0norm = vecops::norm2(&r);
    let mut history = vec![hist_scale];
    let mut best_x = x.clone();
    let mut best_res = r0norm;
    let mut restarts_left = 3usize;

    'outer: while best_res / bnorm > cfg.tol && report.iterations < maxit {
        let mut rt = match (shadow, report.iterations) {
            (Some(s), 0) => s.to_vec(),
            _ => vecops::conj(&r),
        };
        let mut p = r.clone();
        let mut pt = rt.clone();
        let mut rho = vecops::dot(&rt, &r);
        let mut q = vecops::zeros(n);
        let mut qt = vecops::zeros(n);

        loop {
            let (nr, nrt) = (vecops::norm2(&r), vecops::norm2(&rt));
            if !(rho.norm() > BREAKDOWN_TOL * nr * nrt) {
                report.breakdowns += 1;
                break 'outer;
            }
            op.apply(&p, &mut q);
            op.apply_adjoint(&pt, &mut qt);
            report.matvecs += 2;
            let sigma = vecops::dot(&pt, &q);
            if !(sigma.norm() > BREAKDOWN_TOL * vecops::norm2(&pt) * vecops::norm2(&q)) {
                report.breakdowns += 1;
                break 'outer;
            }
            let alpha = rho / sigma;
            vecops::axpy(alpha, &p, &mut x);
            vecops::axpy(-alpha, &q, &mut r);
            vecops::axpy(-alpha.conj(), &qt, &mut rt);
            report.iterations += 1;

            let rnorm = vecops::norm2(&r);
            if !rnorm.is_finite() {
                report.breakdowns += 1;
                break 'outer;
            }
            history.push(hist_scale * rnorm / r0norm);
            if rnorm < best_res {
                best_res = rnorm;
                best_x.copy_from_slice(&x);
            }
            if rnorm / bnorm <= cfg.tol {
                // confirm against the true residual; restart from it if the recurrence drifted
                r = vecops::sub(b, &op.apply_vec(&x));
                report.matvecs += 1;
                let true_norm = vecops::norm2(&r);
                best_res = true_norm;
                best_x.copy_from_slice(&x);
                if true_norm / bnorm <= cfg.tol || restarts_left == 0 {
                    break 'outer;
                }
                restarts_left -= 1;
                continue 'outer;
            }
            if report.iterations >= maxit {
                break 'outer;
            }
            let rho_new = vecops::dot(&rt, &r);
            let beta = rho_new / rho;
            for (pi, ri) in p.iter_mut().zip(&r) {
                *pi = ri + beta * *pi;
            }
            let beta_c = beta.conj();
            for (pi, ri) in pt.iter_mut().zip(&rt) {
                *pi = ri + beta_c * *pi;
            }
            rho = rho_new;
        }
    }

    let res = vecops::sub(b, &op.apply_vec(&best_x));
    report.matvecs += 1;
    report.final_relres = vecops::norm2(&res) / bnorm;
    report.converged = report.final_relres <= cfg.tol;
    report.residual_history = cfg.record_history.then_some(history);
    Ok((best_x, report))
}
