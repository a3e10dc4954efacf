use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::quadrature::legendre_gauss;
use super::{DeflationError, Result};
use crate::krylov::{bicg, LinearOperator, ShiftedOperator, SolverConfig};
use crate::rng;
use crate::sparse::{vecops, DenseLu, DenseMatrix};
use crate::C64;

pub const DEFAULT_Q: usize = 128;

/// Circle `|z - center| = radius` with a Gauss-Legendre order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContourSpec {
    pub center: C64,
    pub radius: f64,
    pub q: usize,
}

impl ContourSpec {
    pub fn new(center: C64, radius: f64, q: usize) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(DeflationError::InvalidContour(format!("radius must be positive, got {radius}")));
        }
        if q < 2 {
            return Err(DeflationError::InvalidContour(format!("quadrature order must be at least 2, got {q}")));
        }
        if !(center.re.is_finite() && center.im.is_finite()) {
            return Err(DeflationError::InvalidContour("center must be finite".into()));
        }
        Ok(Self { center, radius, q })
    }

    pub fn with_q(self, q: usize) -> Result<Self> {
        Self::new(self.center, self.radius, q)
    }

    /// Strict interior test `|z - c| < r`.
    pub fn contains(&self, z: C64) -> bool {
        (z - self.center).norm() < self.radius
    }

    /// Quadrature node `c + r e^{i pi theta}`.
    pub fn point(&self, theta: f64) -> C64 {
        self.center + self.radius * C64::from_polar(1.0, PI * theta)
    }
}

/// Parses `"c_re,c_im,r"`; the order defaults to [`DEFAULT_Q`].
impl FromStr for ContourSpec {
    type Err = DeflationError;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(DeflationError::InvalidContour(format!("expected \"c_re,c_im,r\", got {s:?}")));
        }
        let mut v = [0.0; 3];
        for (slot, p) in v.iter_mut().zip(&parts) {
            *slot = p
                .parse()
                .map_err(|_| DeflationError::InvalidContour(format!("{p:?} is not a number in {s:?}")))?;
        }
        Self::new(C64::new(v[0], v[1]), v[2], DEFAULT_Q)
    }
}

impl fmt::Display for ContourSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.center.re, self.center.im, self.radius)
    }
}

#[derive(Debug, Clone)]
pub struct ContourOptions {
    pub inner: SolverConfig,
    /// Solve with dense LU when BiCG misses the tolerance and `N` is at most this.
    pub dense_fallback_max_n: usize,
    /// Halve the solves for real `A`, `Y` and center.
    pub exploit_symmetry: bool,
}

impl ContourOptions {
    pub fn new(inner: SolverConfig) -> Self {
        Self { inner, dense_fallback_max_n: 2000, exploit_symmetry: true }
    }

    /// Inner BiCG with `tol = 1e-10` and `maxit = n`.
    pub fn for_dimension(n: usize) -> Self {
        Self::new(SolverConfig::new(1e-10, n.max(1)))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NodeReport {
    pub index: usize,
    pub z: C64,
    pub iterations: usize,
    pub max_relres: f64,
    pub converged: bool,
    pub dense_fallback: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ContourDiagnostics {
    pub nodes: Vec<NodeReport>,
    /// Indices of nodes whose shifted solves missed the tolerance.
    pub unconverged: Vec<usize>,
    pub conjugate_symmetry: bool,
    pub shifted_solves: usize,
    pub total_iterations: usize,
}

impl ContourDiagnostics {
    pub fn all_converged(&self) -> bool {
        self.unconverged.is_empty()
    }
}

/// Real standard normal `n x m` block from the contour stream of `seed`.
pub fn random_block(n: usize, m: usize, seed: u64) -> DenseMatrix {
    let mut r = rng::stream(seed, rng::streams::CONTOUR_Y);
    rng::gaussian_matrix(&mut r, n, m)
}

pub fn contour_subspace<O: LinearOperator + ?Sized>(
    a: &O,
    y: &DenseMatrix,
    gamma: &ContourSpec,
    inner: &SolverConfig,
) -> Result<(DenseMatrix, ContourDiagnostics)> {
    contour_subspace_with(a, y, gamma, &ContourOptions::new(*inner))
}

/// `Z = (r/2) sum_k w_k e^{i pi theta_k} ((c + r e^{i pi theta_k}) I - A)^{-1} Y`.
///
/// Unconverged inner solves do not abort; they are listed in the diagnostics.
pub fn contour_subspace_with<O: LinearOperator + ?Sized>(
    a: &O,
    y: &DenseMatrix,
    gamma: &ContourSpec,
    opts: &ContourOptions,
) -> Result<(DenseMatrix, ContourDiagnostics)> {
    let n = a.dim();
    if y.nrows() != n {
        return Err(DeflationError::DimensionMismatch { expected: n, found: y.nrows() });
    }
    opts.inner.validate()?;
    let rule = legendre_gauss(gamma.q);
    let symmetric = opts.exploit_symmetry && a.is_real() && y.is_real() && gamma.center.im == 0.0;
    let active: Vec<usize> = (0..rule.len()).filter(|&k| !symmetric || rule.nodes[k] >= 0.0).collect();
    let dense = std::sync::OnceLock::new();

    let solved: Vec<(DenseMatrix, NodeReport)> = active
        .par_iter()
        .map(|&k| {
            let z = gamma.point(rule.nodes[k]);
            solve_node(a, y, z, k, opts, &dense)
        })
        .collect::<Result<_>>()?;

    let m = y.ncols();
    let mut zraw = DenseMatrix::zeros(n, m);
    let mut reports = Vec::with_capacity(solved.len());
    for ((x, rep), &k) in solved.into_iter().zip(&active) {
        let theta = rule.nodes[k];
        let mut coef = 0.5 * gamma.radius * rule.weights[k] * C64::from_polar(1.0, PI * theta);
        // the node and its mirror contribute 2 Re(term); a zero node only Re(term)
        let take_real = symmetric;
        if symmetric && theta > 0.0 {
            coef *= 2.0;
        }
        for j in 0..m {
            let out = zraw.col_mut(j);
            for (o, xi) in out.iter_mut().zip(x.col(j)) {
                let t = coef * xi;
                *o += if take_real { C64::new(t.re, 0.0) } else { t };
            }
        }
        reports.push(rep);
    }

    let unconverged = reports.iter().filter(|r| !r.converged).map(|r| r.index).collect();
    let diagnostics = ContourDiagnostics {
        unconverged,
        conjugate_symmetry: symmetric,
        shifted_solves: reports.len() * m,
        total_iterations: reports.iter().map(|r| r.iterations).sum(),
        nodes: reports,
    };
    Ok((zraw, diagnostics))
}

fn solve_node<O: LinearOperator + ?Sized>(
    a: &O,
    y: &DenseMatrix,
    z: C64,
    index: usize,
    opts: &ContourOptions,
    dense: &std::sync::OnceLock<DenseMatrix>,
) -> Result<(DenseMatrix, NodeReport)> {
    let n = a.dim();
    let op = ShiftedOperator::new(a, z);
    let mut x = DenseMatrix::zeros(n, y.ncols());
    let mut rep = NodeReport { index, z, iterations: 0, max_relres: 0.0, converged: true, dense_fallback: false };
    let mut failed = Vec::new();
    for j in 0..y.ncols() {
        let (xj, r) = bicg(&op, y.col(j), &vecops::zeros(n), &opts.inner)?;
        rep.iterations += r.iterations;
        if r.converged {
            rep.max_relres = rep.max_relres.max(r.final_relres);
            x.col_mut(j).copy_from_slice(&xj);
        } else {
            failed.push((j, xj, r.final_relres));
        }
    }
    if failed.is_empty() {
        return Ok((x, rep));
    }
    if n <= opts.dense_fallback_max_n {
        let base = dense.get_or_init(|| a.to_dense());
        let mut shifted = base.scaled(C64::new(-1.0, 0.0));
        for i in 0..n {
            shifted[(i, i)] += z;
        }
        if let Ok(lu) = DenseLu::factor(&shifted) {
            rep.dense_fallback = true;
            for (j, _, _) in &failed {
                let xj = lu.solve(y.col(*j));
                let res = vecops::sub(y.col(*j), &shifted.mul_vec(&xj));
                let relres = vecops::norm2(&res) / vecops::norm2(y.col(*j)).max(f64::MIN_POSITIVE);
                rep.max_relres = rep.max_relres.max(relres);
                x.col_mut(*j).copy_from_slice(&xj);
            }
            rep.converged = rep.max_relres <= opts.inner.tol;
            return Ok((x, rep));
        }
    }
    rep.converged = false;
    for (j, xj, relres) in failed {
        rep.max_relres = rep.max_relres.max(relres);
        x.col_mut(j).copy_from_slice(&xj);
    }
    Ok((x, rep))
}
