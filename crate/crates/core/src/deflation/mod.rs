//! Deflation by an approximate spectral projector.
//!
//! `contour_subspace` integrates the resolvent against a random block over a
//! circle with Gauss-Legendre quadrature, `build_subspace` orthonormalizes
//! the result and factors the coarse matrix `Z^H A Z`, and `deflated_solve`
//! splits the solution into a coarse part and a projected Krylov part.

mod contour;
mod exact;
mod persist;
mod projector;
mod quadrature;
mod solve;
mod subspace;

pub use contour::{
    contour_subspace, contour_subspace_with, random_block, ContourDiagnostics, ContourOptions, ContourSpec,
    NodeReport, DEFAULT_Q,
};
pub use exact::{default_m, exact_eigvec_subspace, ExactSubspace};
pub use persist::{load_z, save_z, SubspaceMeta};
pub use projector::{DeflatedOperator, ProjectorPair};
pub use quadrature::{legendre_gauss, QuadratureRule};
pub use solve::{deflated_solve, KrylovMethod};
pub use subspace::{build_subspace, DeflationSubspace, MAX_COARSE_CONDITION, RANK_TOL};

use crate::krylov::KrylovError;
use crate::oracle::OracleError;

#[derive(Debug, thiserror::Error)]
pub enum DeflationError {
    #[error("invalid contour: {0}")]
    InvalidContour(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("Z^H A Z is numerically singular (condition estimate {0:.3e}); try a larger q or a different contour")]
    SingularCoarse(f64),
    #[error("no eigenvalues inside the contour: nothing to deflate")]
    EmptyContour,
    #[error("solver: {0}")]
    Krylov(#[from] KrylovError),
    #[error("oracle: {0}")]
    Oracle(#[from] OracleError),
    #[error("subspace file: {0}")]
    Persist(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, DeflationError>;
