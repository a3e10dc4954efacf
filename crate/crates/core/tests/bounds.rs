mod common;

use cdefl::deflation::{build_subspace, ProjectorPair};
use cdefl::krylov::gmres;
use cdefl::model::{synthetic_matrix, SyntheticSpec};
use cdefl::oracle::{chebyshev_bound, EllipseSpec};
use cdefl::{DenseMatrix, SolverConfig};
use common::*;
use num_complex::Complex64 as C64;
use rand::Rng;

/// Chebyshev polynomial by the three-term recurrence, for real arguments.
fn cheb(j: usize, x: f64) -> f64 {
    let (mut t0, mut t1) = (1.0, x);
    if j == 0 {
        return 1.0;
    }
    for _ in 1..j {
        let t2 = 2.0 * x * t1 - t0;
        t0 = t1;
        t1 = t2;
    }
    t1
}

#[test]
fn bound_matches_recurrence_for_real_center() {
    let e = EllipseSpec::new(c(4.0), 1.0, 2.0).unwrap();
    for j in 0..40 {
        let want = cheb(j, 2.0) / cheb(j, 4.0);
        let got = chebyshev_bound(&e, j, 1.0).unwrap().exact;
        assert!((got - want).abs() <= 1e-13 * want, "j={j}");
    }
}

fn ellipse_spectrum(seed: u64, n: usize, e: &EllipseSpec) -> Vec<C64> {
    let mut r = rng(seed);
    let b = (e.semi_major.powi(2) - e.focal.powi(2)).sqrt();
    (0..n)
        .map(|_| {
            let t: f64 = r.random_range(0.0..std::f64::consts::TAU);
            let rho: f64 = r.random_range(0.3f64..1.0).sqrt();
            e.center + C64::new(rho * e.semi_major * t.cos(), rho * b * t.sin())
        })
        .collect()
}

#[test]
fn gmres_history_respects_the_normal_matrix_bound() {
    let e = EllipseSpec::new(c(4.0), 1.0, 2.0).unwrap();
    let n = 40;
    let ev = ellipse_spectrum(3, n, &e);
    assert!(ev.iter().all(|&l| e.contains(l)));
    let sm = synthetic_matrix(&SyntheticSpec { eigenvalues: ev, kappa_v: 1.0, seed: 3 }).unwrap();
    let b = random_vector(&mut rng(8), n);
    let cfg = SolverConfig::new(1e-14, n).with_restart(n).with_history();
    let (_, rep) = gmres(&sm.matrix, &b, &vec![c(0.0); n], &cfg).unwrap();
    for (j, &rel) in rep.residual_history.unwrap().iter().enumerate() {
        let bound = chebyshev_bound(&e, j, 1.0).unwrap().exact;
        assert!(rel <= bound + 1e-10, "j={j}: {rel:e} > {bound:e}");
    }
}

#[test]
fn deflating_eigenvectors_keeps_the_bound_for_the_rest() {
    let e = EllipseSpec::new(c(4.0), 1.0, 2.0).unwrap();
    let n = 40;
    let mut ev = ellipse_spectrum(5, n, &e);
    // five outliers near the origin spoil the undeflated bound
    for (k, l) in ev.iter_mut().take(5).enumerate() {
        *l = C64::new(0.05 * (k as f64 + 1.0), 0.02);
    }
    let sm = synthetic_matrix(&SyntheticSpec { eigenvalues: ev, kappa_v: 1.0, seed: 5 }).unwrap();
    let z: DenseMatrix = sm.eigenvectors.leading_columns(5);
    let d = build_subspace(&sm.matrix, &z).unwrap();
    let pair = ProjectorPair::new(&sm.matrix, &d);
    let b = random_vector(&mut rng(2), n);
    let pb = pair.apply_p(&b);
    let cfg = SolverConfig::new(1e-14, n).with_restart(n).with_history();
    let (_, rep) = gmres(&pair.deflated_operator(), &pb, &vec![c(0.0); n], &cfg).unwrap();
    for (j, &rel) in rep.residual_history.unwrap().iter().enumerate() {
        let bound = chebyshev_bound(&e, j, 1.0).unwrap().exact;
        assert!(rel <= bound + 1e-10, "j={j}: {rel:e} > {bound:e}");
    }
}
