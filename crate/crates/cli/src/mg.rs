use cdefl::model::{convdiff_matrix, ConvDiffSpec};
use cdefl::multigrid::{build_hierarchy, mg_solve, CycleKind, CycleSpec, MgError, MgReport, RougherSetup, Smoother};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result, Stage};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum SmootherChoice {
    Jacobi,
    GaussSeidel,
    DeflatedGmres,
}

/// Multigrid driver settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MgConfig {
    pub n: usize,
    pub re: f64,
    pub upwind: bool,
    pub levels: usize,
    pub kind: CycleKind,
    pub smoother: SmootherChoice,
    /// `None` takes the smoother's default count.
    pub pre_smooth: Option<usize>,
    pub post_smooth: Option<usize>,
    pub omega: f64,
    /// GMRES steps per rougher application.
    pub ks: usize,
    /// Eigenvalues targeted per level by the rougher's contour.
    pub nev: usize,
    pub rougher_q: usize,
    pub seed: u64,
    pub tol: f64,
    pub max_cycles: usize,
}

impl MgConfig {
    pub fn cycle_spec(&self) -> CycleSpec {
        let base = match self.smoother {
            SmootherChoice::Jacobi => CycleSpec { smoother: Smoother::Jacobi { omega: self.omega }, ..CycleSpec::jacobi(self.kind) },
            SmootherChoice::GaussSeidel => CycleSpec { smoother: Smoother::GaussSeidel, ..CycleSpec::jacobi(self.kind) },
            SmootherChoice::DeflatedGmres => CycleSpec::deflated_gmres(self.kind, self.ks),
        };
        CycleSpec {
            pre_smooth: self.pre_smooth.unwrap_or(base.pre_smooth),
            post_smooth: self.post_smooth.unwrap_or(base.post_smooth),
            ..base
        }
    }
}

fn mg_err(e: MgError) -> CliError {
    match e {
        MgError::IncompatibleSize { .. } | MgError::NoLevels | MgError::Model(_) => CliError::input(Stage::Config, e),
        MgError::Deflation { .. } | MgError::MissingDeflation(_) => CliError::internal(Stage::Subspace, e),
        other => CliError::internal(Stage::Solve, other),
    }
}

/// Solve the model problem with its manufactured right-hand side.
pub fn run_mg(cfg: &MgConfig) -> Result<MgReport> {
    let spec = ConvDiffSpec::new(cfg.n, cfg.re).with_upwind(cfg.upwind);
    let mut h = build_hierarchy(&spec, cfg.levels).map_err(mg_err)?;
    if cfg.smoother == SmootherChoice::DeflatedGmres {
        h.setup_deflated_rougher(&RougherSetup { nev: cfg.nev, q: cfg.rougher_q, seed: cfg.seed }).map_err(mg_err)?;
    }
    let (_, b) = convdiff_matrix(&spec).map_err(|e| CliError::input(Stage::Load, e))?;
    let (_, report) = mg_solve(&h, &cfg.cycle_spec(), &b, None, cfg.tol, cfg.max_cycles).map_err(mg_err)?;
    Ok(report)
}
