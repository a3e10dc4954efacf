//! Test-system generators: 2D convection-diffusion and matrices with a
//! prescribed spectrum.

mod convdiff;
mod synthetic;

pub use convdiff::{convdiff_matrix, manufactured_solution, poisson_eigenvalues, Coefficient, ConvDiffSpec, Source};
pub use synthetic::{synthetic_matrix, SyntheticMatrix, SyntheticSpec};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("invalid model specification: {0}")]
    InvalidSpec(String),
}

pub type Result<T> = std::result::Result<T, ModelError>;
