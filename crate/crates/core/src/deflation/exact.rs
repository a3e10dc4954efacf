use super::contour::ContourSpec;
use super::subspace::{build_subspace, DeflationSubspace};
use super::{DeflationError, Result};
use crate::krylov::LinearOperator;
use crate::oracle::{count_inside, dense_eig, InsideCount, OracleError, DEFAULT_DENSE_CAP};
use crate::rng;

/// `s + ceil(s / 10)`
pub fn default_m(s: usize) -> usize {
    s + s.div_ceil(10)
}

#[derive(Debug, Clone)]
pub struct ExactSubspace {
    pub subspace: DeflationSubspace,
    pub count: InsideCount,
    /// `m < s`: some eigenvectors inside the contour are not deflated.
    pub incomplete: bool,
}

/// `Z = orth([v_1 .. v_s] M)` with `v_i` the eigenvectors inside `gamma` and
/// `M` a random real `s x m` matrix.
pub fn exact_eigvec_subspace<O: LinearOperator + ?Sized>(
    a: &O,
    gamma: &ContourSpec,
    m: usize,
    seed: u64,
) -> Result<ExactSubspace> {
    if a.dim() > DEFAULT_DENSE_CAP {
        return Err(OracleError::TooLarge { n: a.dim(), cap: DEFAULT_DENSE_CAP }.into());
    }
    let dense = a.to_dense();
    let e = dense_eig(&dense)?;
    let count = count_inside(&e.values, gamma);
    let inside: Vec<usize> = (0..e.values.len()).filter(|&i| gamma.contains(e.values[i])).collect();
    if inside.is_empty() {
        return Err(DeflationError::EmptyContour);
    }
    if m == 0 {
        return Err(DeflationError::DimensionMismatch { expected: inside.len(), found: 0 });
    }
    let vs = e.vectors.expect("vectors requested").select_columns(&inside);
    let mut r = rng::stream(seed, rng::streams::EIG_MIX);
    let mix = rng::gaussian_matrix(&mut r, inside.len(), m);
    let subspace = build_subspace(a, &vs.matmul(&mix))?;
    Ok(ExactSubspace { subspace, count, incomplete: m < inside.len() })
}
