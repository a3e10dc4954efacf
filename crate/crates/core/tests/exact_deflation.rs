mod common;

use cdefl::deflation::{exact_eigvec_subspace, ContourSpec, ProjectorPair};
use cdefl::model::{synthetic_matrix, SyntheticSpec};
use cdefl::oracle::dense_eigenvalues;
use cdefl::LinearOperator;
use common::*;
use num_complex::Complex64 as C64;
use rand::Rng;

#[test]
fn deflated_spectrum_is_zero_plus_the_rest() {
    for seed in 0..5u64 {
        let mut r = rng(seed);
        let n = 40 + 10 * seed as usize;
        let s = 3 + seed as usize;
        // s eigenvalues inside D(0, 0.5), the rest in an annulus well outside
        let mut ev: Vec<C64> = (0..s).map(|_| C64::from_polar(r.random_range(0.05..0.4), r.random_range(0.0..std::f64::consts::TAU))).collect();
        ev.extend((s..n).map(|_| C64::from_polar(r.random_range(1.5..3.0), r.random_range(0.0..std::f64::consts::TAU))));
        let sm = synthetic_matrix(&SyntheticSpec { eigenvalues: ev.clone(), kappa_v: 10.0, seed }).unwrap();
        let gamma = ContourSpec::new(C64::new(0.0, 0.0), 1.0, 32).unwrap();
        let ex = exact_eigvec_subspace(&sm.matrix, &gamma, s, seed).unwrap();
        assert_eq!(ex.count.inside, s);
        assert!(!ex.incomplete);

        let pair = ProjectorPair::new(&sm.matrix, &ex.subspace);
        let pa = pair.deflated_operator().to_dense();
        let got = dense_eigenvalues(&pa).unwrap();
        let mut want = vec![C64::new(0.0, 0.0); s];
        want.extend_from_slice(&ev[s..]);
        let anorm = sm.matrix.frobenius_norm();
        let h = hausdorff(&got, &want);
        assert!(h <= 1e-7 * anorm, "seed {seed}: Hausdorff distance {h:e}");
        let zeros = got.iter().filter(|l| l.norm() <= 1e-8 * anorm).count();
        assert_eq!(zeros, s, "seed {seed}");
    }
}

#[test]
fn oversized_m_keeps_the_subspace_rank() {
    let ev: Vec<C64> = (1..=20).map(|k| c(k as f64 * 0.5)).collect();
    let sm = synthetic_matrix(&SyntheticSpec { eigenvalues: ev, kappa_v: 1.0, seed: 9 }).unwrap();
    let gamma = ContourSpec::new(c(0.0), 1.2, 16).unwrap();
    let ex = exact_eigvec_subspace(&sm.matrix, &gamma, 5, 1).unwrap();
    assert_eq!(ex.count.inside, 2);
    assert_eq!(ex.subspace.numerical_rank(), 2);
}
