use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use super::bounds::kappa2_r22;
use super::eig::{dense_eig, dense_eigenvalues};
use super::svd::kappa2;
use super::{OracleError, Result};
use crate::deflation::ContourSpec;
use crate::sparse::{DenseLu, DenseMatrix};
use crate::C64;

/// Relative distance to the circle below which an eigenvalue is "on" it.
const BOUNDARY_BAND: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct InsideCount {
    /// `|{lambda : |lambda - c| < r}|`
    pub inside: usize,
    /// Eigenvalues within `1e-8 r` of the circle, on either side.
    pub near_boundary: usize,
}

pub fn count_inside(values: &[C64], gamma: &ContourSpec) -> InsideCount {
    let mut out = InsideCount { inside: 0, near_boundary: 0 };
    for &l in values {
        let dist = (l - gamma.center).norm();
        if dist < gamma.radius {
            out.inside += 1;
        }
        if (dist - gamma.radius).abs() <= BOUNDARY_BAND * gamma.radius {
            out.near_boundary += 1;
        }
    }
    out
}

/// `V diag(1_inside) V^{-1}` from a dense eigendecomposition.
pub fn true_spectral_projector(a: &DenseMatrix, gamma: &ContourSpec) -> Result<DenseMatrix> {
    let e = dense_eig(a)?;
    if let Some(&l) = e
        .values
        .iter()
        .find(|l| ((*l - gamma.center).norm() - gamma.radius).abs() <= BOUNDARY_BAND * gamma.radius)
    {
        return Err(OracleError::EigenvalueOnContour(l));
    }
    let v = e.vectors.expect("vectors requested");
    let inside: Vec<usize> = (0..e.values.len()).filter(|&i| gamma.contains(e.values[i])).collect();
    let n = a.nrows();
    if inside.is_empty() {
        return Ok(DenseMatrix::zeros(n, n));
    }
    let vinv = DenseLu::factor(&v).map_err(|_| OracleError::Singular)?.inverse();
    let vs = v.select_columns(&inside);
    let ws = DenseMatrix::from_fn(inside.len(), n, |i, j| vinv[(inside[i], j)]);
    Ok(vs.matmul(&ws))
}

/// Eigenvalue summary of a dense matrix, serializable as JSON or CSV.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<C64>,
    #[serde(skip)]
    pub eigenvectors: Option<DenseMatrix>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count_inside: Option<InsideCount>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa2_v: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa2_r22: Option<f64>,
}

impl SpectrumReport {
    pub fn compute(a: &DenseMatrix, gamma: Option<&ContourSpec>, with_vectors: bool) -> Result<Self> {
        let (eigenvalues, eigenvectors) = if with_vectors {
            let e = dense_eig(a)?;
            (e.values, e.vectors)
        } else {
            (dense_eigenvalues(a)?, None)
        };
        let count_inside = gamma.map(|g| count_inside(&eigenvalues, g));
        Ok(Self { eigenvalues, eigenvectors, count_inside, kappa2_v: None, kappa2_r22: None })
    }

    /// Fill `kappa2_v` and, for `1 <= m < N`, `kappa2_r22`. Needs eigenvectors.
    pub fn with_conditioning(mut self, m: Option<usize>) -> Result<Self> {
        let v = self.eigenvectors.as_ref().ok_or(OracleError::Singular)?;
        self.kappa2_v = Some(kappa2(v));
        if let Some(m) = m {
            self.kappa2_r22 = Some(kappa2_r22(v, m)?);
        }
        Ok(self)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for l in &self.eigenvalues {
            s.push_str(&format!("{:e},{:e}\n", l.re, l.im));
        }
        s
    }
}

/// One `re,im` line per eigenvalue, no header.
pub fn write_eigenvalues_csv(path: &Path, values: &[C64]) -> Result<()> {
    let mut w = BufWriter::new(std::fs::File::create(path)?);
    for l in values {
        writeln!(w, "{:e},{:e}", l.re, l.im)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_eigenvalues_csv(path: &Path) -> Result<Vec<C64>> {
    let r = BufReader::new(std::fs::File::open(path)?);
    let mut out = Vec::new();
    for (lineno, line) in r.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let bad = || std::io::Error::new(std::io::ErrorKind::InvalidData, format!("line {}: expected re,im", lineno + 1));
        let (re, im) = line.split_once(',').ok_or_else(bad)?;
        let re: f64 = re.trim().parse().map_err(|_| bad())?;
        let im: f64 = im.trim().parse().map_err(|_| bad())?;
        out.push(C64::new(re, im));
    }
    Ok(out)
}
