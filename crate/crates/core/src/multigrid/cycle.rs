use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::hierarchy::{GridHierarchy, Level};
use super::transfer::{prolongate, restrict};
use super::{MgError, Result};
use crate::deflation::ProjectorPair;
use crate::krylov::{gmres, SolveReport, SolverConfig};
use crate::sparse::vecops;
use crate::C64;

/// Residual growth factor across one smoothing phase treated as divergence.
const DIVERGENCE_GROWTH: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CycleKind {
    V,
    W,
}

impl CycleKind {
    /// Coarse-grid visits per level.
    pub fn recursions(self) -> usize {
        match self {
            Self::V => 1,
            Self::W => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Smoother {
    Jacobi { omega: f64 },
    GaussSeidel,
    /// `steps` GMRES iterations on the level's deflated system.
    DeflatedGmres { steps: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleSpec {
    pub kind: CycleKind,
    pub pre_smooth: usize,
    pub post_smooth: usize,
    pub smoother: Smoother,
}

impl CycleSpec {
    /// Weighted Jacobi with `omega = 0.8`, two pre- and two post-smoothing sweeps.
    pub fn jacobi(kind: CycleKind) -> Self {
        Self { kind, pre_smooth: 2, post_smooth: 2, smoother: Smoother::Jacobi { omega: 0.8 } }
    }

    pub fn deflated_gmres(kind: CycleKind, steps: usize) -> Self {
        Self { kind, pre_smooth: 3, post_smooth: 3, smoother: Smoother::DeflatedGmres { steps } }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MgReport {
    #[serde(flatten)]
    pub solve: SolveReport,
    /// `||r_k|| / ||r_{k-1}||` for each cycle.
    pub reduction_factors: Vec<f64>,
    /// Work per cycle in fine-grid matrix-vector products.
    pub work_per_cycle: Vec<f64>,
}

struct Work {
    fine_nnz: f64,
    units: f64,
}

impl Work {
    fn matvec(&mut self, level: &Level) {
        self.units += level.a.nnz() as f64 / self.fine_nnz;
    }

    fn flops(&mut self, count: usize) {
        self.units += count as f64 / self.fine_nnz;
    }
}

fn residual(level: &Level, b: &[C64], x: &[C64], work: &mut Work) -> Vec<C64> {
    work.matvec(level);
    vecops::sub(b, &level.a.matvec(x).expect("level dimensions fixed"))
}

fn smooth(level: &Level, j: usize, smoother: Smoother, b: &[C64], x: &mut [C64], work: &mut Work) -> Result<()> {
    match smoother {
        Smoother::Jacobi { omega } => {
            let r = residual(level, b, x, work);
            for ((xi, ri), di) in x.iter_mut().zip(&r).zip(&level.diag) {
                *xi += omega * ri / di;
            }
        }
        Smoother::GaussSeidel => {
            work.matvec(level);
            for i in 0..x.len() {
                let (cols, vals) = level.a.row(i);
                let mut s = b[i];
                let mut d = C64::new(0.0, 0.0);
                for (&c, &v) in cols.iter().zip(vals) {
                    if c == i {
                        d = v;
                    } else {
                        s -= v * x[c];
                    }
                }
                x[i] = s / d;
            }
        }
        Smoother::DeflatedGmres { steps } => {
            let d = level.deflation.as_ref().ok_or(MgError::MissingDeflation(j))?;
            let r = residual(level, b, x, work);
            let pair = ProjectorPair::new(&level.a, d);
            let e1 = pair.coarse_correction(&r);
            let pr = pair.apply_p(&r);
            let cfg = SolverConfig::new(1e-14, steps.max(1)).with_restart(steps.max(1));
            let (e_sharp, rep) = gmres(&pair.deflated_operator(), &pr, &vecops::zeros(x.len()), &cfg)?;
            let e2 = pair.apply_p_tilde(&e_sharp);
            let proj_cost = 4 * d.m() * x.len();
            for _ in 0..rep.matvecs + 1 {
                work.matvec(level);
                work.flops(proj_cost);
            }
            for ((xi, a), c) in x.iter_mut().zip(&e1).zip(&e2) {
                *xi += a + c;
            }
        }
    }
    Ok(())
}

fn smooth_checked(
    h: &GridHierarchy,
    j: usize,
    spec: &CycleSpec,
    sweeps: usize,
    b: &[C64],
    x: &mut [C64],
    work: &mut Work,
) -> Result<()> {
    if sweeps == 0 {
        return Ok(());
    }
    let level = &h.levels[j];
    let before = vecops::norm2(&residual(level, b, x, work));
    for _ in 0..sweeps {
        smooth(level, j, spec.smoother, b, x, work)?;
    }
    let after = vecops::norm2(&residual(level, b, x, work));
    if after > DIVERGENCE_GROWTH * before || !after.is_finite() {
        return Err(MgError::SmootherDivergence { level: j, n: level.n, growth: after / before.max(f64::MIN_POSITIVE) });
    }
    Ok(())
}

fn cycle(h: &GridHierarchy, j: usize, spec: &CycleSpec, b: &[C64], x: &mut [C64], work: &mut Work) -> Result<()> {
    let level = &h.levels[j];
    if j == 0 {
        x.copy_from_slice(&h.coarse_lu.solve(b));
        work.flops(2 * b.len() * b.len());
        return Ok(());
    }
    smooth_checked(h, j, spec, spec.pre_smooth, b, x, work)?;
    let r = residual(level, b, x, work);
    let restriction = level.restriction.as_ref().expect("non-coarsest level has transfers");
    let prolongation = level.prolongation.as_ref().expect("non-coarsest level has transfers");
    let rc = restrict(restriction, &r);
    work.flops(restriction.nnz());
    let mut ec = vecops::zeros(rc.len());
    for _ in 0..spec.kind.recursions() {
        cycle(h, j - 1, spec, &rc, &mut ec, work)?;
    }
    let e = prolongate(prolongation, &ec);
    work.flops(prolongation.nnz());
    for (xi, ei) in x.iter_mut().zip(&e) {
        *xi += ei;
    }
    smooth_checked(h, j, spec, spec.post_smooth, b, x, work)
}

/// One cycle on the finest level starting from `x`.
pub fn mg_cycle(h: &GridHierarchy, spec: &CycleSpec, b: &[C64], x: &[C64]) -> Result<Vec<C64>> {
    Ok(cycle_with_work(h, spec, b, x)?.0)
}

fn cycle_with_work(h: &GridHierarchy, spec: &CycleSpec, b: &[C64], x: &[C64]) -> Result<(Vec<C64>, f64)> {
    let fine = h.finest();
    let nn = fine.unknowns();
    if b.len() != nn || x.len() != nn {
        return Err(MgError::DimensionMismatch { expected: nn, found: if b.len() != nn { b.len() } else { x.len() } });
    }
    let mut work = Work { fine_nnz: fine.a.nnz() as f64, units: 0.0 };
    let mut out = x.to_vec();
    cycle(h, h.depth() - 1, spec, b, &mut out, &mut work)?;
    Ok((out, work.units))
}

/// Repeat cycles until `||b - Ax|| / ||b|| <= tol` or `max_cycles` is reached.
pub fn mg_solve(
    h: &GridHierarchy,
    spec: &CycleSpec,
    b: &[C64],
    x0: Option<&[C64]>,
    tol: f64,
    max_cycles: usize,
) -> Result<(Vec<C64>, MgReport)> {
    let start = Instant::now();
    let fine = h.finest();
    let nn = fine.unknowns();
    if b.len() != nn {
        return Err(MgError::DimensionMismatch { expected: nn, found: b.len() });
    }
    let mut x = x0.map(<[C64]>::to_vec).unwrap_or_else(|| vecops::zeros(nn));
    let bnorm = vecops::norm2(b);
    let relres = |x: &[C64]| {
        let r = vecops::sub(b, &fine.a.matvec(x).expect("dimensions checked"));
        if bnorm > 0.0 { vecops::norm2(&r) / bnorm } else { vecops::norm2(&r) }
    };
    let mut res = relres(&x);
    let mut history = vec![res];
    let mut factors = Vec::new();
    let mut work = Vec::new();
    let mut cycles = 0;
    while res > tol && cycles < max_cycles {
        let (xn, w) = cycle_with_work(h, spec, b, &x)?;
        x = xn;
        let next = relres(&x);
        factors.push(next / res);
        work.push(w);
        res = next;
        history.push(res);
        cycles += 1;
    }
    let solve = SolveReport {
        iterations: cycles,
        final_relres: res,
        converged: res <= tol,
        matvecs: cycles + 1,
        wall_time: start.elapsed().as_secs_f64(),
        residual_history: Some(history),
        true_error: None,
        breakdowns: 0,
    };
    Ok((x, MgReport { solve, reduction_factors: factors, work_per_cycle: work }))
}
