use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use super::{ModelError, Result};
use crate::sparse::SparseMatrix;
use crate::C64;

type Field = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// A scalar field on the unit square.
#[derive(Clone)]
pub enum Coefficient {
    Constant(f64),
    Function(Field),
}

impl Coefficient {
    pub fn at(&self, x: f64, y: f64) -> f64 {
        match self {
            Self::Constant(c) => *c,
            Self::Function(f) => f(x, y),
        }
    }
}

impl fmt::Debug for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(c) => write!(f, "Constant({c})"),
            Self::Function(_) => f.write_str("Function(..)"),
        }
    }
}

#[derive(Debug, Clone)]
pub enum Source {
    /// `f` chosen so that `u = sin(pi x) sin(pi y)` solves the continuous problem.
    Manufactured,
    Field(Coefficient),
}

/// `-(u_xx + u_yy + Re (p u_x + q u_y)) = f` on the unit square with Dirichlet data.
///
/// Unknowns are the `n x n` interior points, `h = 1/(n+1)`, ordered
/// lexicographically with `k = j n + i` for the point `((i+1)h, (j+1)h)`.
#[derive(Debug, Clone)]
pub struct ConvDiffSpec {
    pub n: usize,
    pub re: f64,
    pub p: Coefficient,
    pub q: Coefficient,
    pub source: Source,
    pub boundary: Coefficient,
    pub upwind: bool,
}

impl ConvDiffSpec {
    /// `p = q = 1`, manufactured source, zero boundary data, centered convection.
    pub fn new(n: usize, re: f64) -> Self {
        Self {
            n,
            re,
            p: Coefficient::Constant(1.0),
            q: Coefficient::Constant(1.0),
            source: Source::Manufactured,
            boundary: Coefficient::Constant(0.0),
            upwind: false,
        }
    }

    pub fn poisson(n: usize) -> Self {
        Self::new(n, 0.0)
    }

    pub fn with_upwind(mut self, upwind: bool) -> Self {
        self.upwind = upwind;
        self
    }

    /// Same problem on a different grid.
    pub fn with_n(&self, n: usize) -> Self {
        Self { n, ..self.clone() }
    }

    pub fn h(&self) -> f64 {
        1.0 / (self.n as f64 + 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(ModelError::InvalidSpec("grid needs at least one interior point per side".into()));
        }
        if !self.re.is_finite() {
            return Err(ModelError::InvalidSpec(format!("Re must be finite, got {}", self.re)));
        }
        Ok(())
    }

    fn source_at(&self, x: f64, y: f64) -> f64 {
        match &self.source {
            Source::Field(f) => f.at(x, y),
            Source::Manufactured => {
                let (sx, cx) = (PI * x).sin_cos();
                let (sy, cy) = (PI * y).sin_cos();
                let ux = PI * cx * sy;
                let uy = PI * sx * cy;
                2.0 * PI * PI * sx * sy - self.re * (self.p.at(x, y) * ux + self.q.at(x, y) * uy)
            }
        }
    }
}

/// Five-point discretization and right-hand side with boundary data folded in.
pub fn convdiff_matrix(spec: &ConvDiffSpec) -> Result<(SparseMatrix, Vec<C64>)> {
    spec.validate()?;
    let n = spec.n;
    let h = spec.h();
    let h2 = h * h;
    let mut triplets = Vec::with_capacity(5 * n * n);
    let mut rhs = vec![C64::new(0.0, 0.0); n * n];
    for j in 0..n {
        for i in 0..n {
            let k = j * n + i;
            let (x, y) = ((i + 1) as f64 * h, (j + 1) as f64 * h);
            let bx = -spec.re * spec.p.at(x, y);
            let by = -spec.re * spec.q.at(x, y);
            let mut diag = 4.0 / h2;
            let (mut e, mut w, mut nn, mut s) = (-1.0 / h2, -1.0 / h2, -1.0 / h2, -1.0 / h2);
            if spec.upwind {
                diag += (bx.abs() + by.abs()) / h;
                if bx > 0.0 { w -= bx / h } else { e += bx / h }
                if by > 0.0 { s -= by / h } else { nn += by / h }
            } else {
                e += bx / (2.0 * h);
                w -= bx / (2.0 * h);
                nn += by / (2.0 * h);
                s -= by / (2.0 * h);
            }
            triplets.push((k, k, C64::new(diag, 0.0)));
            let mut f = spec.source_at(x, y);
            let neighbours = [(i as isize + 1, j as isize, e), (i as isize - 1, j as isize, w), (i as isize, j as isize + 1, nn), (i as isize, j as isize - 1, s)];
            for (ii, jj, coef) in neighbours {
                if ii < 0 || jj < 0 || ii >= n as isize || jj >= n as isize {
                    let (xb, yb) = ((ii + 1) as f64 * h, (jj + 1) as f64 * h);
                    f -= coef * spec.boundary.at(xb, yb);
                } else if coef != 0.0 {
                    triplets.push((k, jj as usize * n + ii as usize, C64::new(coef, 0.0)));
                }
            }
            rhs[k] = C64::new(f, 0.0);
        }
    }
    let a = SparseMatrix::from_triplets(n * n, n * n, &triplets).expect("stencil indices are in range");
    Ok((a, rhs))
}

/// `sin(pi x) sin(pi y)` sampled at the interior points.
pub fn manufactured_solution(n: usize) -> Vec<C64> {
    let h = 1.0 / (n as f64 + 1.0);
    let mut u = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            let (x, y) = ((i + 1) as f64 * h, (j + 1) as f64 * h);
            u.push(C64::new((PI * x).sin() * (PI * y).sin(), 0.0));
        }
    }
    u
}

/// `(4 - 2 cos(i pi h) - 2 cos(j pi h)) / h^2` for `i, j = 1..n`, ascending.
pub fn poisson_eigenvalues(n: usize) -> Vec<f64> {
    let h = 1.0 / (n as f64 + 1.0);
    let mut ev = Vec::with_capacity(n * n);
    for i in 1..=n {
        for j in 1..=n {
            ev.push((4.0 - 2.0 * (i as f64 * PI * h).cos() - 2.0 * (j as f64 * PI * h).cos()) / (h * h));
        }
    }
    ev.sort_by(f64::total_cmp);
    ev
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::dense_eigenvalues;
    use crate::sparse::{vecops, DenseLu};

    #[test]
    fn classical_poisson_stencil() {
        let (a, _) = convdiff_matrix(&ConvDiffSpec::poisson(3)).unwrap();
        let h2 = 1.0 / 16.0;
        assert_eq!(a.nrows(), 9);
        for k in 0..9 {
            assert!((a.get(k, k).re - 4.0 / h2).abs() < 1e-12);
            let (cols, vals) = a.row(k);
            for (&c, v) in cols.iter().zip(vals) {
                if c != k {
                    assert!((v.re + 1.0 / h2).abs() < 1e-12);
                }
            }
        }
        assert_eq!(a.nnz(), 9 + 2 * 12);
        assert_eq!(a.get(4, 5).re, -16.0);
        assert_eq!(a.get(4, 7).re, -16.0);
        assert_eq!(a.get(2, 3).re, 0.0);
    }

    #[test]
    fn poisson_spectrum_matches_formula() {
        for n in [2, 3, 5] {
            let (a, _) = convdiff_matrix(&ConvDiffSpec::poisson(n)).unwrap();
            let mut ev: Vec<f64> = dense_eigenvalues(&a.to_dense()).unwrap().iter().map(|l| l.re).collect();
            ev.sort_by(f64::total_cmp);
            for (g, w) in ev.iter().zip(poisson_eigenvalues(n)) {
                assert!((g - w).abs() <= 1e-8 * w, "{g} vs {w}");
            }
        }
    }

    #[test]
    fn convection_rows_sum_to_zero_inside() {
        for upwind in [false, true] {
            let n = 31;
            let (a, _) = convdiff_matrix(&ConvDiffSpec::new(n, 100.0).with_upwind(upwind)).unwrap();
            assert!(a.get(1, 0) != a.get(0, 1));
            for j in 1..n - 1 {
                for i in 1..n - 1 {
                    let (_, vals) = a.row(j * n + i);
                    let s: C64 = vals.iter().sum();
                    assert!(s.norm() <= 1e-10 * a.get(0, 0).norm(), "row sum {s}");
                }
            }
        }
    }

    #[test]
    fn boundary_data_enters_rhs() {
        let mut spec = ConvDiffSpec::poisson(1);
        spec.source = Source::Field(Coefficient::Constant(0.0));
        spec.boundary = Coefficient::Constant(1.0);
        let (a, b) = convdiff_matrix(&spec).unwrap();
        // single unknown: 16 u = 4 * 4 * 1
        assert_eq!(a.get(0, 0).re, 16.0);
        assert_eq!(b[0].re, 16.0);
    }

    #[test]
    fn manufactured_error_is_second_order() {
        let err = |n: usize| {
            let (a, b) = convdiff_matrix(&ConvDiffSpec::poisson(n)).unwrap();
            let x = DenseLu::factor(&a.to_dense()).unwrap().solve(&b);
            vecops::norm_inf(&vecops::sub(&x, &manufactured_solution(n)))
        };
        let (e1, e2) = (err(7), err(15));
        let ratio = e1 / e2;
        assert!((3.5..=4.5).contains(&ratio), "{ratio}");
    }

    #[test]
    fn zero_size_is_rejected() {
        assert!(convdiff_matrix(&ConvDiffSpec::poisson(0)).is_err());
    }
}
