use serde::{Deserialize, Serialize};

use super::svd::kappa2;
use super::{OracleError, Result};
use crate::sparse::{thin_qr, DenseMatrix};
use crate::C64;

/// Ellipse with center `c`, foci `c ± d` on a horizontal line, semi-major axis `a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipseSpec {
    pub center: C64,
    pub focal: f64,
    pub semi_major: f64,
}

impl EllipseSpec {
    pub fn new(center: C64, focal: f64, semi_major: f64) -> Result<Self> {
        if !(focal >= 0.0 && semi_major >= focal && semi_major.is_finite()) {
            return Err(OracleError::InvalidEllipse(format!("need a >= d >= 0, got a={semi_major}, d={focal}")));
        }
        Ok(Self { center, focal, semi_major })
    }

    /// Closed ellipse membership.
    pub fn contains(&self, z: C64) -> bool {
        let f1 = self.center - self.focal;
        let f2 = self.center + self.focal;
        (z - f1).norm() + (z - f2).norm() <= 2.0 * self.semi_major
    }
}

/// Exact Chebyshev ratio and its geometric asymptote `delta^j`, both scaled by kappa.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChebyshevBound {
    pub exact: f64,
    pub asymptotic: f64,
}

/// Root of `w + 1/w = 2x` with `|w| >= 1`, picking the sign that avoids cancellation.
fn joukowski(x: C64) -> C64 {
    let s = (x * x - 1.0).sqrt();
    let (w1, w2) = (x + s, x - s);
    if w1.norm() >= w2.norm() {
        w1
    } else {
        w2
    }
}

/// `kappa * C_j(a/d) / |C_j(c/d)|` and `kappa * delta^j`.
///
/// Chebyshev polynomials are evaluated as `(w^j + w^-j) / 2` with `w` the
/// Joukowski preimage, factored so that no power of `w` is formed directly.
pub fn chebyshev_bound(e: &EllipseSpec, j: usize, kappa: f64) -> Result<ChebyshevBound> {
    if e.contains(C64::new(0.0, 0.0)) {
        return Err(OracleError::OriginInsideEllipse);
    }
    let jf = j as f64;
    if e.focal == 0.0 {
        // C_j(x) ~ 2^(j-1) x^j as d -> 0
        let ratio = (e.semi_major / e.center.norm()).powf(jf);
        return Ok(ChebyshevBound { exact: kappa * ratio, asymptotic: kappa * ratio });
    }
    let wa = joukowski(C64::new(e.semi_major / e.focal, 0.0));
    let wc = joukowski(e.center / e.focal);
    let log_delta = wa.norm().ln() - wc.norm().ln();
    let tail = |w: C64| (C64::new(1.0, 0.0) + (-2.0 * jf * w.ln()).exp()).norm();
    let den = tail(wc);
    if den == 0.0 {
        return Err(OracleError::InvalidEllipse("C_j(c/d) vanishes".into()));
    }
    Ok(ChebyshevBound {
        exact: kappa * (jf * log_delta).exp() * tail(wa) / den,
        asymptotic: kappa * (jf * log_delta).exp(),
    })
}

/// `kappa_2(R22)` where `V = QR` and `R22` is the trailing `(N-m) x (N-m)` block.
pub fn kappa2_r22(v: &DenseMatrix, m: usize) -> Result<f64> {
    let n = v.nrows();
    if v.ncols() != n {
        return Err(OracleError::NotSquare { nrows: n, ncols: v.ncols() });
    }
    if m == 0 || m >= n {
        return Err(OracleError::DimensionMismatch { expected: n - 1, found: m });
    }
    let qr = thin_qr(v).map_err(|_| OracleError::Singular)?;
    if qr.is_rank_deficient(1e-14) {
        return Err(OracleError::Singular);
    }
    Ok(kappa2(&qr.r.submatrix(m..n, m..n)))
}
