mod common;

use cdefl::krylov::{bicg, bicg_restarting, gmres, solve_shifted};
use cdefl::precond::ilu0;
use cdefl::{LinearOperator, SolverConfig};
use common::*;
use num_complex::Complex64 as C64;
use proptest::prelude::*;

fn reference_solution(a: &cdefl::SparseMatrix, b: &[C64]) -> Vec<C64> {
    matvec(&inverse(&a.to_dense()), b)
}

#[test]
fn bicg_and_gmres_agree_with_a_direct_solve() {
    let mut r = rng(11);
    let a = random_sparse(&mut r, 120, 4, 5.0);
    let b = random_vector(&mut r, 120);
    let x_ref = reference_solution(&a, &b);
    let cfg = SolverConfig::new(1e-11, 2000).with_restart(40);
    let x0 = vec![c(0.0); 120];
    let (xb, rb) = bicg(&a, &b, &x0, &cfg).unwrap();
    let (xg, rg) = gmres(&a, &b, &x0, &cfg).unwrap();
    assert!(rb.converged && rg.converged);
    for x in [&xb, &xg] {
        assert!(diff_norm(x, &x_ref) <= 1e-8 * norm(&x_ref));
    }
}

#[test]
fn shifted_solve_matches_dense_resolvent() {
    let mut r = rng(12);
    let a = random_sparse(&mut r, 80, 3, 1.0);
    let z = C64::new(7.0, 2.5);
    let y = random_vector(&mut r, 80);
    let (x, rep) = solve_shifted(&a, z, &y, &SolverConfig::new(1e-12, 500)).unwrap();
    assert!(rep.converged);
    let mut zia = a.to_dense().scaled(C64::new(-1.0, 0.0));
    for i in 0..80 {
        zia[(i, i)] += z;
    }
    let want = matvec(&inverse(&zia), &y);
    assert!(diff_norm(&x, &want) <= 1e-9 * norm(&want));
}

#[test]
fn ilu0_preconditioning_reduces_iterations() {
    let spec = cdefl::model::ConvDiffSpec::new(31, 50.0);
    let (a, b) = cdefl::model::convdiff_matrix(&spec).unwrap();
    let cfg = SolverConfig::new(1e-8, 5000);
    let x0 = vec![c(0.0); a.nrows()];
    let (_, plain) = bicg_restarting(&a, &b, &x0, &cfg).unwrap();
    let f = ilu0(&a, true).unwrap();
    let op = f.operator(&a).unwrap();
    let (u, pre) = bicg_restarting(&op, &f.transform_rhs(&b), &x0, &cfg).unwrap();
    assert!(plain.converged && pre.converged);
    assert!(pre.iterations * 2 < plain.iterations, "{} vs {}", pre.iterations, plain.iterations);
    let x = f.recover_solution(&u);
    let r = diff_norm(&a.apply_vec(&x), &b) / norm(&b);
    assert!(r <= 1e-6, "{r:e}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn gmres_history_never_increases_within_a_cycle(seed in any::<u64>(), n in 5usize..60, restart in 2usize..20) {
        let mut r = rng(seed);
        let a = random_sparse(&mut r, n, 3, 1.5);
        let b = random_vector(&mut r, n);
        let cfg = SolverConfig::new(1e-10, 200).with_restart(restart).with_history();
        let (_, rep) = gmres(&a, &b, &vec![c(0.0); n], &cfg).unwrap();
        let h = rep.residual_history.unwrap();
        for (j, w) in h.windows(2).enumerate() {
            if (j + 1) % restart != 0 {
                prop_assert!(w[1] <= w[0] * (1.0 + 1e-12), "step {}: {} > {}", j, w[1], w[0]);
            }
        }
    }

    #[test]
    fn reported_residual_is_the_true_residual(seed in any::<u64>(), n in 3usize..50) {
        let mut r = rng(seed);
        let a = random_sparse(&mut r, n, 3, 3.0);
        let b = random_vector(&mut r, n);
        let cfg = SolverConfig::new(1e-9, 10 * n);
        let (x, rep) = bicg(&a, &b, &vec![c(0.0); n], &cfg).unwrap();
        let rel = diff_norm(&a.apply_vec(&x), &b) / norm(&b);
        prop_assert!((rel - rep.final_relres).abs() <= 1e-12 + 1e-6 * rel);
        prop_assert_eq!(rep.converged, rep.final_relres <= 1e-9);
    }
}
