use std::fs;
use std::io::Write;
use std::time::Instant;

use cdefl::deflation::{
    build_subspace, contour_subspace_with, deflated_solve, exact_eigvec_subspace, random_block, ContourOptions,
    DeflationError, DeflationSubspace, ProjectorPair,
};
use cdefl::krylov::{bicg_restarting, gmres, LinearOperator, SolveReport, SolverConfig};
use cdefl::model::{convdiff_matrix, ConvDiffSpec};
use cdefl::oracle::{count_inside, dense_eigenvalues, OracleError, DEFAULT_DENSE_CAP};
use cdefl::sparse::{mm_read, mm_read_vector, vecops};
use cdefl::{ilu0, DenseMatrix, SparseMatrix};
use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::config::{Computation, Disk, MatrixSource, Precond, Rhs, RunConfig};
use crate::error::{CliError, Result, Stage};
use crate::provenance::Provenance;

/// A loaded system `A x = b`.
#[derive(Debug, Clone)]
pub struct Problem {
    pub name: String,
    pub a: SparseMatrix,
    pub b: Vec<C64>,
}

pub fn load_matrix(src: &MatrixSource) -> Result<SparseMatrix> {
    match src {
        MatrixSource::File { path } => {
            let mm = mm_read(path).map_err(|e| CliError::input(Stage::Load, format!("{}: {e}", path.display())))?;
            if !mm.matrix.is_square() {
                return Err(CliError::input(
                    Stage::Load,
                    format!("{} is {}x{}, not square", path.display(), mm.matrix.nrows(), mm.matrix.ncols()),
                ));
            }
            Ok(mm.matrix)
        }
        MatrixSource::Convdiff { n, re, upwind } => {
            let spec = ConvDiffSpec::new(*n, *re).with_upwind(*upwind);
            convdiff_matrix(&spec).map(|(a, _)| a).map_err(|e| CliError::input(Stage::Load, e))
        }
    }
}

pub fn load_problem(cfg: &RunConfig) -> Result<Problem> {
    let a = load_matrix(&cfg.matrix)?;
    let b = match &cfg.rhs {
        Rhs::Ones => a.matvec(&vecops::ones(a.ncols())).map_err(|e| CliError::internal(Stage::Load, e))?,
        Rhs::File(path) => {
            let b = mm_read_vector(path)
                .map_err(|e| CliError::input(Stage::Load, format!("{}: {e}", path.display())))?;
            if b.len() != a.nrows() {
                return Err(CliError::input(
                    Stage::Load,
                    format!("right-hand side has {} entries, matrix has {} rows", b.len(), a.nrows()),
                ));
            }
            b
        }
    };
    Ok(Problem { name: cfg.label(), a, b })
}

#[derive(Debug, Clone, Serialize)]
pub struct SubspaceSummary {
    pub m: usize,
    pub numerical_rank: usize,
    pub rank_deficient: bool,
    pub coarse_condition: f64,
}

impl From<&DeflationSubspace> for SubspaceSummary {
    fn from(d: &DeflationSubspace) -> Self {
        Self {
            m: d.m(),
            numerical_rank: d.numerical_rank(),
            rank_deficient: d.rank_deficient(),
            coarse_condition: d.coarse_condition(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ContourSummary {
    pub nodes: usize,
    pub shifted_solves: usize,
    pub total_iterations: usize,
    pub unconverged_nodes: Vec<usize>,
    pub conjugate_symmetry: bool,
}

/// Everything `run` produces, serialized as the JSON report.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub matrix: String,
    pub n: usize,
    pub nnz: usize,
    pub computation: Computation,
    pub precond: Precond,
    pub solver: cdefl::deflation::KrylovMethod,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contour: Option<Disk>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eig_inside: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subspace: Option<SubspaceSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub contour_solves: Option<ContourSummary>,
    pub iterations: usize,
    pub converged: bool,
    /// `||b - Ax|| / ||b||` for plain runs, `||Pb - PAx|| / ||Pb||` for deflated
    /// runs, both on the system the Krylov method saw.
    pub err: f64,
    /// `||b - A x|| / ||b||` on the original, unpreconditioned system.
    pub true_relres: f64,
    pub solve: SolveReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ilu_patched_pivots: Option<usize>,
    pub provenance: Provenance,
    #[serde(skip)]
    pub x: Vec<C64>,
    /// Orthonormal deflation basis `Z` of deflated runs.
    #[serde(skip)]
    pub basis: Option<DenseMatrix>,
}

impl RunReport {
    /// JSON with the timing field removed, for reproducibility checks.
    pub fn deterministic_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let Some(s) = v.get_mut("solve").and_then(|s| s.as_object_mut()) {
            s.remove("wall_time_s");
        }
        v
    }
}

fn subspace_err(e: DeflationError) -> CliError {
    match e {
        DeflationError::Oracle(OracleError::TooLarge { n, cap }) => CliError::input(
            Stage::Subspace,
            format!("N = {n} exceeds the dense eigensolver cap {cap}; use contour-deflate instead"),
        ),
        DeflationError::EmptyContour | DeflationError::InvalidContour(_) => CliError::input(Stage::Subspace, e),
        other => CliError::internal(Stage::Subspace, other),
    }
}

struct Outcome {
    u: Vec<C64>,
    report: SolveReport,
    err: f64,
    eig_inside: Option<usize>,
    subspace: Option<SubspaceSummary>,
    contour_solves: Option<ContourSummary>,
    basis: Option<DenseMatrix>,
}

fn relres(op: &(impl LinearOperator + ?Sized), b: &[C64], x: &[C64]) -> f64 {
    let r = vecops::sub(b, &op.apply_vec(x));
    let bn = vecops::norm2(b);
    if bn > 0.0 {
        vecops::norm2(&r) / bn
    } else {
        vecops::norm2(&r)
    }
}

/// `||Pb - PAx|| / ||Pb||`, with `||Pb - PAx||` alone when `Pb = 0`.
pub fn projected_err<O: LinearOperator + ?Sized>(op: &O, d: &DeflationSubspace, b: &[C64], x: &[C64]) -> f64 {
    let pair = ProjectorPair::new(op, d);
    let pb = pair.apply_p(b);
    let pax = pair.apply_p(&op.apply_vec(x));
    let num = vecops::norm2(&vecops::sub(&pb, &pax));
    let den = vecops::norm2(&pb);
    if den > 0.0 {
        num / den
    } else {
        num
    }
}

fn count_eigs<O: LinearOperator + ?Sized>(op: &O, d: &Disk, q: usize) -> Result<Option<usize>> {
    if op.dim() > DEFAULT_DENSE_CAP {
        return Ok(None);
    }
    let gamma = d.contour(q)?;
    let ev = dense_eigenvalues(&op.to_dense()).map_err(|e| CliError::internal(Stage::Subspace, e))?;
    Ok(Some(count_inside(&ev, &gamma).inside))
}

fn solve_on<O: LinearOperator + ?Sized>(op: &O, rhs: &[C64], cfg: &RunConfig) -> Result<Outcome> {
    let n = op.dim();
    let scfg = SolverConfig::new(cfg.tol, cfg.maxit_for(n)).with_history().with_seed(cfg.seed);
    let solve_err = |e: &dyn std::fmt::Display| CliError::internal(Stage::Solve, e);
    match cfg.computation {
        Computation::Plain => {
            let x0 = vecops::zeros(n);
            let (u, report) = match cfg.solver {
                cdefl::deflation::KrylovMethod::Bicg => bicg_restarting(op, rhs, &x0, &scfg),
                cdefl::deflation::KrylovMethod::Gmres => gmres(op, rhs, &x0, &scfg),
            }
            .map_err(|e| solve_err(&e))?;
            let eig_inside = match (&cfg.contour, cfg.count_eigs) {
                (Some(d), true) => count_eigs(op, d, cfg.q)?,
                _ => None,
            };
            let err = relres(op, rhs, &u);
            Ok(Outcome { u, report, err, eig_inside, subspace: None, contour_solves: None, basis: None })
        }
        Computation::ContourDeflate | Computation::EigDeflate => {
            let disk = cfg.contour.expect("validated");
            let m = cfg.m.expect("validated");
            let gamma = disk.contour(cfg.q)?;
            let (d, eig_inside, contour_solves) = if cfg.computation == Computation::EigDeflate {
                let ex = exact_eigvec_subspace(op, &gamma, m, cfg.seed).map_err(subspace_err)?;
                (ex.subspace, Some(ex.count.inside), None)
            } else {
                let y = random_block(n, m, cfg.seed);
                let (zraw, diag) = contour_subspace_with(op, &y, &gamma, &ContourOptions::for_dimension(n))
                    .map_err(subspace_err)?;
                let d = build_subspace(op, &zraw).map_err(subspace_err)?;
                let summary = ContourSummary {
                    nodes: diag.nodes.len(),
                    shifted_solves: diag.shifted_solves,
                    total_iterations: diag.total_iterations,
                    unconverged_nodes: diag.unconverged.clone(),
                    conjugate_symmetry: diag.conjugate_symmetry,
                };
                let count = if cfg.count_eigs { count_eigs(op, &disk, cfg.q)? } else { None };
                (d, count, Some(summary))
            };
            let (u, report) = deflated_solve(op, rhs, &d, &scfg, cfg.solver).map_err(|e| solve_err(&e))?;
            let err = projected_err(op, &d, rhs, &u);
            Ok(Outcome { u, report, err, eig_inside, subspace: Some((&d).into()), contour_solves, basis: Some(d.z().clone()) })
        }
    }
}

/// Run one configured pipeline end to end. Non-convergence is reported, not an error.
pub fn run(cfg: &RunConfig) -> Result<RunReport> {
    cfg.validate()?;
    let start = Instant::now();
    let p = load_problem(cfg)?;
    let (outcome, x, patched) = match cfg.precond {
        Precond::None => {
            let o = solve_on(&p.a, &p.b, cfg)?;
            let x = o.u.clone();
            (o, x, None)
        }
        Precond::Ilu0 => {
            let f = ilu0(&p.a, true).map_err(|e| CliError::input(Stage::Precond, e))?;
            let op = f.operator(&p.a).map_err(|e| CliError::internal(Stage::Precond, e))?;
            let rhs = f.transform_rhs(&p.b);
            let o = solve_on(&op, &rhs, cfg)?;
            let x = f.recover_solution(&o.u);
            (o, x, Some(f.patched_pivots()))
        }
    };
    let true_relres = relres(&p.a, &p.b, &x);
    let mut solve = outcome.report;
    solve.wall_time = start.elapsed().as_secs_f64();
    let report = RunReport {
        matrix: p.name.clone(),
        n: p.a.nrows(),
        nnz: p.a.nnz(),
        computation: cfg.computation,
        precond: cfg.precond,
        solver: cfg.solver,
        contour: cfg.contour,
        q: (cfg.computation == Computation::ContourDeflate).then_some(cfg.q),
        eig_inside: outcome.eig_inside,
        subspace: outcome.subspace,
        contour_solves: outcome.contour_solves,
        iterations: solve.iterations,
        converged: solve.converged,
        err: outcome.err,
        true_relres,
        solve,
        ilu_patched_pivots: patched,
        provenance: Provenance::new(&p.a, cfg),
        x,
        basis: outcome.basis,
    };
    write_outputs(cfg, &report)?;
    Ok(report)
}

fn write_outputs(cfg: &RunConfig, report: &RunReport) -> Result<()> {
    let io = |e: std::io::Error| CliError::input(Stage::Output, e);
    if let Some(path) = &cfg.output {
        let json = serde_json::to_string_pretty(report).map_err(|e| CliError::internal(Stage::Output, e))?;
        fs::write(path, json + "\n").map_err(io)?;
    }
    if let (Some(path), Some(hist)) = (&cfg.history_csv, &report.solve.residual_history) {
        let mut w = std::io::BufWriter::new(fs::File::create(path).map_err(io)?);
        writeln!(w, "iteration,relres").map_err(io)?;
        for (j, r) in hist.iter().enumerate() {
            writeln!(w, "{j},{r:e}").map_err(io)?;
        }
        w.flush().map_err(io)?;
    }
    Ok(())
}

/// Eigenvalues of `A` (or of the ILU(0)-preconditioned operator) by a dense solve.
pub fn spectrum(src: &MatrixSource, precond: Precond) -> Result<Vec<C64>> {
    let a = load_matrix(src)?;
    if a.nrows() > DEFAULT_DENSE_CAP {
        return Err(CliError::input(
            Stage::Subspace,
            format!(
                "N = {} exceeds the dense eigensolver cap {DEFAULT_DENSE_CAP}; extract a leading submatrix or skip spectrum export",
                a.nrows()
            ),
        ));
    }
    let dense = match precond {
        Precond::None => a.to_dense(),
        Precond::Ilu0 => {
            let f = ilu0(&a, true).map_err(|e| CliError::input(Stage::Precond, e))?;
            f.operator(&a).map_err(|e| CliError::internal(Stage::Precond, e))?.to_dense()
        }
    };
    dense_eigenvalues(&dense).map_err(|e| CliError::internal(Stage::Subspace, e))
}
