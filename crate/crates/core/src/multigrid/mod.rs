//! Geometric multigrid for the convection-diffusion model problem.
//!
//! Levels are rediscretized on grids with `n_{j+1} = 2 n_j + 1`, coupled by
//! bilinear prolongation and full-weighting restriction `R = P^T / 4`. The
//! smoother may be weighted Jacobi, Gauss-Seidel or a few deflated GMRES
//! steps whose subspace encloses each level's eigenvalues nearest the origin.

mod cycle;
mod hierarchy;
mod transfer;

pub use cycle::{mg_cycle, mg_solve, CycleKind, CycleSpec, MgReport, Smoother};
pub use hierarchy::{build_hierarchy, admissible_sizes, GridHierarchy, Level, RougherSetup};
pub use transfer::{prolongation_matrix, prolongate, restrict, restriction_matrix};

use crate::deflation::DeflationError;

#[derive(Debug, thiserror::Error)]
pub enum MgError {
    #[error("n = {n} does not admit {levels} levels of 2:1 coarsening; admissible sizes include {admissible:?}")]
    IncompatibleSize { n: usize, levels: usize, admissible: Vec<usize> },
    #[error("at least one level is required")]
    NoLevels,
    #[error("right-hand side has length {found}, finest level has {expected} unknowns")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("smoother diverged on level {level} (n = {n}): residual grew by {growth:.2e}")]
    SmootherDivergence { level: usize, n: usize, growth: f64 },
    #[error("level {0} has no deflation subspace; call setup_deflated_rougher first")]
    MissingDeflation(usize),
    #[error("coarsest level is singular")]
    SingularCoarse,
    #[error("model: {0}")]
    Model(#[from] crate::model::ModelError),
    #[error("deflation setup on level {level}: {source}")]
    Deflation { level: usize, source: DeflationError },
    #[error("solver: {0}")]
    Krylov(#[from] crate::krylov::KrylovError),
}

pub type Result<T> = std::result::Result<T, MgError>;
