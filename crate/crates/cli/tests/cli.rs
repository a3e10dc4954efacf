use std::path::Path;
use std::process::Command;

use cdefl::sparse::mm_write;
use cdefl::{DenseMatrix, LinearOperator, SparseMatrix};
use cdefl_cli::{bench_table, format_table, run, spectrum, Cell, Computation, Disk, Manifest, MatrixSource, Precond, RunConfig};
use num_complex::Complex64 as C64;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn write_mtx(dir: &Path, name: &str, a: &SparseMatrix) -> std::path::PathBuf {
    let p = dir.join(name);
    mm_write(a, std::fs::File::create(&p).unwrap()).unwrap();
    p
}

fn file_config(path: std::path::PathBuf) -> RunConfig {
    RunConfig::new(MatrixSource::File { path })
}

fn norm(v: &[C64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn mat(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    DenseMatrix::from_fn(a.nrows(), b.ncols(), |i, j| (0..a.ncols()).map(|k| a[(i, k)] * b[(k, j)]).sum())
}

fn adj(a: &DenseMatrix) -> DenseMatrix {
    DenseMatrix::from_fn(a.ncols(), a.nrows(), |i, j| a[(j, i)].conj())
}

/// Inverse of a small matrix by cofactor-free Gauss-Jordan.
fn inv(a: &DenseMatrix) -> DenseMatrix {
    let n = a.nrows();
    let mut m: Vec<Vec<C64>> =
        (0..n).map(|i| (0..2 * n).map(|j| if j < n { a[(i, j)] } else if j - n == i { c(1.0) } else { c(0.0) }).collect()).collect();
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| m[x][col].norm().total_cmp(&m[y][col].norm())).unwrap();
        m.swap(col, piv);
        let p = m[col][col];
        m[col].iter_mut().for_each(|v| *v /= p);
        for row in 0..n {
            if row != col {
                let f = m[row][col];
                let pr = m[col].clone();
                m[row].iter_mut().zip(&pr).for_each(|(v, q)| *v -= f * q);
            }
        }
    }
    DenseMatrix::from_fn(n, n, |i, j| m[i][n + j])
}

#[test]
fn plain_bicg_on_a_diagonal_recovers_ones() {
    let dir = tempfile::tempdir().unwrap();
    let a = SparseMatrix::from_diagonal(&(1..=5).map(|k| c(k as f64)).collect::<Vec<_>>());
    let rep = run(&file_config(write_mtx(dir.path(), "d.mtx", &a))).unwrap();
    assert!(rep.converged);
    assert!(rep.x.iter().all(|v| (v - c(1.0)).norm() <= 1e-7));
    assert_eq!(rep.n, 5);
}

#[test]
fn identical_configs_give_identical_reports() {
    let mut cfg = RunConfig::new("convdiff:n=15,re=10".parse().unwrap());
    cfg.computation = Computation::ContourDeflate;
    cfg.contour = Some(Disk { center: c(0.0), radius: 150.0 });
    cfg.m = Some(6);
    cfg.q = 16;
    cfg.seed = 42;
    let a = run(&cfg).unwrap();
    let b = run(&cfg).unwrap();
    assert_eq!(a.deterministic_json(), b.deterministic_json());
    cfg.seed = 43;
    let c2 = run(&cfg).unwrap();
    assert_ne!(a.provenance.config_sha256, c2.provenance.config_sha256);
    assert_eq!(a.provenance.matrix_sha256, c2.provenance.matrix_sha256);
}

#[test]
fn deflated_err_matches_an_independent_projection() {
    for comp in [Computation::ContourDeflate, Computation::EigDeflate] {
        let mut cfg = RunConfig::new("convdiff:n=9,re=10".parse().unwrap());
        cfg.computation = comp;
        // moduli 70.5, 95.1 (pair), 119.7: three inside
        cfg.contour = Some(Disk { center: c(0.0), radius: 110.0 });
        cfg.m = Some(5);
        cfg.q = 32;
        let rep = run(&cfg).unwrap();
        let (a, _) = cdefl::model::convdiff_matrix(&cdefl::model::ConvDiffSpec::new(9, 10.0)).unwrap();
        let b = a.apply_vec(&vec![c(1.0); 81]);
        let ad = a.to_dense();
        let z = rep.basis.clone().unwrap();
        let az = mat(&ad, &z);
        let p = DenseMatrix::identity(81).sub(&mat(&mat(&az, &inv(&mat(&adj(&z), &az))), &adj(&z)));
        let pb = p.mul_vec(&b);
        let pax = p.mul_vec(&ad.mul_vec(&rep.x));
        let diff: Vec<C64> = pb.iter().zip(&pax).map(|(x, y)| x - y).collect();
        let want = norm(&diff) / norm(&pb);
        assert!((rep.err - want).abs() <= 1e-12, "{comp}: {} vs {want}", rep.err);
        assert!(rep.converged);
    }
}

#[test]
fn ilu0_run_reports_on_the_original_system() {
    let mut cfg = RunConfig::new("convdiff:n=15,re=50".parse().unwrap());
    cfg.precond = Precond::Ilu0;
    let rep = run(&cfg).unwrap();
    assert!(rep.converged);
    assert_eq!(rep.ilu_patched_pivots, Some(0));
    assert!(rep.true_relres <= 1e-5, "{}", rep.true_relres);
    let mut plain = cfg.clone();
    plain.precond = Precond::None;
    assert!(rep.iterations < run(&plain).unwrap().iterations);
}

#[test]
fn spectrum_examples() {
    let dir = tempfile::tempdir().unwrap();
    let d = SparseMatrix::from_diagonal(&[c(1.0), c(2.0), c(3.0)]);
    let mut ev = spectrum(&MatrixSource::File { path: write_mtx(dir.path(), "d.mtx", &d) }, Precond::None).unwrap();
    ev.sort_by(|x, y| x.re.total_cmp(&y.re));
    assert_eq!(ev.len(), 3);
    for (k, l) in ev.iter().enumerate() {
        assert!((l - c(k as f64 + 1.0)).norm() <= 1e-12);
    }
    let skew = SparseMatrix::from_triplets(2, 2, &[(0, 1, c(1.0)), (1, 0, c(-1.0))]).unwrap();
    let mut ev = spectrum(&MatrixSource::File { path: write_mtx(dir.path(), "s.mtx", &skew) }, Precond::None).unwrap();
    ev.sort_by(|x, y| x.im.total_cmp(&y.im));
    assert!((ev[0] - C64::new(0.0, -1.0)).norm() <= 1e-12);
    assert!((ev[1] - C64::new(0.0, 1.0)).norm() <= 1e-12);
}

#[test]
fn bench_runs_all_three_computations() {
    let mut row = RunConfig::new("convdiff:n=7,re=5".parse().unwrap());
    row.name = Some("tiny".into());
    row.contour = Some(Disk { center: c(0.0), radius: 70.0 });
    row.m = Some(4);
    row.q = 16;
    let mut broken = row.clone();
    broken.name = Some("missing".into());
    broken.matrix = MatrixSource::File { path: "/nonexistent/x.mtx".into() };
    let rows = bench_table(&Manifest { rows: vec![row, broken] });
    assert_eq!(rows.len(), 2);
    for cell in [&rows[0].plain, &rows[0].contour_deflate, &rows[0].eig_deflate] {
        assert!(matches!(cell, Cell::Done { converged: true, .. }), "{cell:?}");
    }
    assert!(rows[0].eig_inside.is_some());
    assert!(matches!(&rows[1].plain, Cell::Fail { stage, .. } if stage == "load"));
    let table = format_table(&rows);
    assert_eq!(table.lines().count(), 3);
    assert!(table.contains("FAIL(load)"));
    let json = serde_json::to_string(&rows).unwrap();
    let back: Vec<cdefl_cli::BenchmarkRow> = serde_json::from_str(&json).unwrap();
    assert_eq!(back, rows);
}

fn cdefl(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_cdefl")).args(args).output().unwrap()
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let ok = cdefl(&["run", "--matrix", "convdiff:n=7,re=5", "-o", out.to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["converged"], true);
    assert_eq!(v["provenance"]["matrix_sha256"].as_str().unwrap().len(), 64);

    let stalled = cdefl(&["run", "--matrix", "convdiff:n=15,re=5", "--maxit", "2"]);
    assert_eq!(stalled.status.code(), Some(1));
    assert_eq!(cdefl(&["run", "--matrix", "/nonexistent.mtx"]).status.code(), Some(2));
    assert_eq!(cdefl(&["run", "--matrix", "convdiff:n=7", "--computation", "eig-deflate"]).status.code(), Some(2));
    assert_eq!(cdefl(&["bogus"]).status.code(), Some(2));
    let too_big = cdefl(&["spectrum", "--matrix", "convdiff:n=65", "-o", dir.path().join("s.csv").to_str().unwrap()]);
    assert_eq!(too_big.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&too_big.stderr).contains("submatrix"));
}

#[test]
fn config_file_with_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("c.json");
    std::fs::write(
        &cfg_path,
        r#"{"matrix": {"kind": "convdiff", "n": 7, "re": 10}, "computation": "eig-deflate",
            "contour": {"center": [0, 0], "radius": 100}, "m": 3, "seed": 7}"#,
    )
    .unwrap();
    let out = dir.path().join("r.json");
    let res = cdefl(&["run", "--config", cfg_path.to_str().unwrap(), "--solver", "gmres", "-o", out.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["solver"], "gmres");
    assert_eq!(v["computation"], "eig-deflate");
    assert!(v["eig_inside"].as_u64().unwrap() >= 1);
}

#[test]
fn gen_output_round_trips_through_run() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.mtx");
    let b = dir.path().join("b.mtx");
    let res = cdefl(&["gen", "--n", "7", "--re", "15", "--out", a.to_str().unwrap(), "--rhs", b.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(0));
    let from_file = run(&file_config(a.clone())).unwrap();
    let from_model = run(&RunConfig::new("convdiff:n=7,re=15".parse().unwrap())).unwrap();
    assert_eq!(from_file.provenance.matrix_sha256, from_model.provenance.matrix_sha256);
    let mut with_rhs = file_config(a);
    with_rhs.rhs = cdefl_cli::Rhs::File(b);
    assert!(run(&with_rhs).unwrap().converged);
}

#[test]
fn mg_subcommand_reports_cycles() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("mg.json");
    let res = cdefl(&["mg", "--n", "31", "--levels", "5", "-o", out.to_str().unwrap()]);
    assert_eq!(res.status.code(), Some(0), "{}", String::from_utf8_lossy(&res.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(v["reduction_factors"].as_array().unwrap().iter().all(|f| f.as_f64().unwrap() < 0.25));
    assert_eq!(cdefl(&["mg", "--n", "30", "--levels", "3"]).status.code(), Some(2));
}
