use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use cdefl::deflation::{ContourSpec, KrylovMethod, DEFAULT_Q};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result, Stage};

pub const DEFAULT_TOL: f64 = 1e-7;
/// Default iteration cap is this multiple of `N`.
pub const MAXIT_PER_UNKNOWN: usize = 1000;

/// Where the system matrix comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MatrixSource {
    /// Matrix Market file.
    File { path: PathBuf },
    /// Convection-diffusion model problem on an `n x n` interior grid.
    Convdiff {
        n: usize,
        re: f64,
        #[serde(default)]
        upwind: bool,
    },
}

impl MatrixSource {
    pub fn label(&self) -> String {
        match self {
            Self::File { path } => path.file_stem().map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned()),
            Self::Convdiff { n, re, upwind } => format!("convdiff-n{n}-re{re}{}", if *upwind { "-upwind" } else { "" }),
        }
    }
}

/// `convdiff:n=31,re=100[,upwind]` or a file path.
impl FromStr for MatrixSource {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let Some(rest) = s.strip_prefix("convdiff:") else {
            return Ok(Self::File { path: PathBuf::from(s) });
        };
        let (mut n, mut re, mut upwind) = (None, 0.0, false);
        for part in rest.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part.split_once('=') {
                Some(("n", v)) => n = Some(v.parse().map_err(|_| format!("bad grid size {v:?}"))?),
                Some(("re", v)) => re = v.parse().map_err(|_| format!("bad Reynolds number {v:?}"))?,
                None if part == "upwind" => upwind = true,
                _ => return Err(format!("unknown model option {part:?}; expected n=, re= or upwind")),
            }
        }
        let n = n.ok_or("model problem needs n=<grid size>")?;
        Ok(Self::Convdiff { n, re, upwind })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Rhs {
    /// `b = A 1`.
    #[default]
    Ones,
    File(PathBuf),
}

impl FromStr for Rhs {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Ok(if s == "ones" { Self::Ones } else { Self::File(PathBuf::from(s)) })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Precond {
    #[default]
    None,
    Ilu0,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Computation {
    /// Krylov solve on the (preconditioned) system.
    #[default]
    Plain,
    /// Deflation with a contour-integral subspace.
    ContourDeflate,
    /// Deflation with exact eigenvectors from a dense eigensolve.
    EigDeflate,
}

impl fmt::Display for Computation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Plain => "plain",
            Self::ContourDeflate => "contour-deflate",
            Self::EigDeflate => "eig-deflate",
        })
    }
}

/// Disk `|z - center| <= radius`; the quadrature order lives in [`RunConfig::q`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Disk {
    pub center: C64,
    pub radius: f64,
}

impl Disk {
    pub fn contour(&self, q: usize) -> Result<ContourSpec> {
        ContourSpec::new(self.center, self.radius, q).map_err(|e| CliError::input(Stage::Config, e))
    }
}

/// `c_re,c_im,r`
impl FromStr for Disk {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let c: ContourSpec = s.parse().map_err(|e| format!("{e}"))?;
        Ok(Self { center: c.center, radius: c.radius })
    }
}

impl fmt::Display for Disk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.center.im == 0.0 {
            write!(f, "D({},{})", self.center.re, self.radius)
        } else {
            write!(f, "D({}{:+}i,{})", self.center.re, self.center.im, self.radius)
        }
    }
}

fn default_q() -> usize {
    DEFAULT_Q
}

fn default_tol() -> f64 {
    DEFAULT_TOL
}

/// One solver run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Display name; defaults to the matrix label.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub matrix: MatrixSource,
    #[serde(default)]
    pub rhs: Rhs,
    #[serde(default)]
    pub precond: Precond,
    #[serde(default)]
    pub computation: Computation,
    #[serde(default)]
    pub contour: Option<Disk>,
    #[serde(default)]
    pub m: Option<usize>,
    #[serde(default = "default_q")]
    pub q: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub solver: KrylovMethod,
    #[serde(default = "default_tol")]
    pub tol: f64,
    /// `None` means `1000 N`.
    #[serde(default)]
    pub maxit: Option<usize>,
    /// Count eigenvalues inside the contour with a dense eigensolve.
    #[serde(default)]
    pub count_eigs: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub history_csv: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(matrix: MatrixSource) -> Self {
        Self {
            name: None,
            matrix,
            rhs: Rhs::Ones,
            precond: Precond::None,
            computation: Computation::Plain,
            contour: None,
            m: None,
            q: DEFAULT_Q,
            seed: 0,
            solver: KrylovMethod::Bicg,
            tol: DEFAULT_TOL,
            maxit: None,
            count_eigs: false,
            output: None,
            history_csv: None,
        }
    }

    pub fn label(&self) -> String {
        self.name.clone().unwrap_or_else(|| self.matrix.label())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(CliError::input(Stage::Config, msg));
        if self.computation != Computation::Plain {
            if self.contour.is_none() {
                return bad(format!("{} needs a contour", self.computation));
            }
            if self.m.is_none() {
                return bad(format!("{} needs m", self.computation));
            }
        }
        if self.m == Some(0) {
            return bad("m must be at least 1".into());
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return bad(format!("tol must lie in (0, 1), got {}", self.tol));
        }
        if self.maxit == Some(0) {
            return bad("maxit must be at least 1".into());
        }
        if let Some(d) = &self.contour {
            d.contour(self.q)?;
        }
        if let MatrixSource::Convdiff { n, .. } = self.matrix {
            if n == 0 {
                return bad("model grid size must be at least 1".into());
            }
        }
        Ok(())
    }

    pub fn maxit_for(&self, n: usize) -> usize {
        self.maxit.unwrap_or(MAXIT_PER_UNKNOWN * n.max(1))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::input(Stage::Config, e))
    }
}
