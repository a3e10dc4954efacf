//! Dense validation oracle: eigendecomposition, singular values, principal
//! angles, spectral projectors and Chebyshev residual bounds.

mod angles;
mod bounds;
mod eig;
mod spectrum;
mod svd;

pub use angles::principal_angles;
pub use bounds::{chebyshev_bound, kappa2_r22, ChebyshevBound, EllipseSpec};
pub use eig::{dense_eig, dense_eigenvalues, EigenDecomposition, DEFAULT_DENSE_CAP};
pub use spectrum::{count_inside, read_eigenvalues_csv, true_spectral_projector, write_eigenvalues_csv, InsideCount, SpectrumReport};
pub use svd::{kappa2, singular_values};

#[derive(Debug, thiserror::Error)]
pub enum OracleError {
    #[error("matrix of order {n} exceeds the dense cap {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("matrix must be square, got {nrows}x{ncols}")]
    NotSquare { nrows: usize, ncols: usize },
    #[error("QR iteration did not converge after {0} sweeps")]
    NoConvergence(usize),
    #[error("matrix is numerically singular")]
    Singular,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid ellipse: {0}")]
    InvalidEllipse(String),
    #[error("the origin lies inside the ellipse; the bound does not apply")]
    OriginInsideEllipse,
    #[error("eigenvalue {0} lies on the contour")]
    EigenvalueOnContour(crate::C64),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, OracleError>;
