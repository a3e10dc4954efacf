//! Sparse Krylov solvers accelerated by deflating near-origin eigenvalues.
//!
//! The deflation subspace is built from a spectral projector approximated
//! with Gauss-Legendre quadrature on a circle in the complex plane; every
//! quadrature node costs one block of shifted linear solves. The crate also
//! carries the supporting pieces: CSR kernels and Matrix Market I/O, BiCG
//! and restarted GMRES, ILU(0), a dense eigen-oracle for validation, model
//! problems and a geometric multigrid solver that can use deflated GMRES as
//! its smoother.

pub mod deflation;
pub mod krylov;
pub mod model;
pub mod multigrid;
pub mod oracle;
pub mod precond;
pub mod rng;
pub mod sparse;

/// Scalar type used throughout: all arithmetic is complex.
pub type C64 = num_complex::Complex64;

pub use deflation::{
    build_subspace, contour_subspace, deflated_solve, exact_eigvec_subspace, legendre_gauss,
    ContourSpec, DeflationSubspace, ProjectorPair, QuadratureRule,
};
pub use krylov::{bicg, gmres, solve_shifted, LinearOperator, SolveReport, SolverConfig};
pub use precond::{ilu0, Ilu0Factor};
pub use sparse::{DenseMatrix, SparseMatrix};
