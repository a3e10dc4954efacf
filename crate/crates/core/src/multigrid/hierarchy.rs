use serde::{Deserialize, Serialize};

use super::transfer::{prolongation_matrix, restriction_matrix};
use super::{MgError, Result};
use crate::deflation::{
    build_subspace, contour_subspace_with, default_m, random_block, ContourOptions, ContourSpec, DeflationSubspace,
};
use crate::model::{convdiff_matrix, ConvDiffSpec};
use crate::oracle::{dense_eigenvalues, DEFAULT_DENSE_CAP};
use crate::sparse::{DenseLu, SparseMatrix};
use crate::C64;

#[derive(Debug, Clone)]
pub struct Level {
    pub n: usize,
    pub a: SparseMatrix,
    pub diag: Vec<C64>,
    /// Transfer to and from the next coarser level; `None` on the coarsest.
    pub prolongation: Option<SparseMatrix>,
    pub restriction: Option<SparseMatrix>,
    pub deflation: Option<DeflationSubspace>,
    pub contour: Option<ContourSpec>,
}

impl Level {
    pub fn unknowns(&self) -> usize {
        self.n * self.n
    }
}

/// Levels ordered coarse to fine.
#[derive(Debug, Clone)]
pub struct GridHierarchy {
    pub levels: Vec<Level>,
    pub coarse_lu: DenseLu,
    pub spec: ConvDiffSpec,
}

/// Grid sizes on which `levels - 1` halvings end on an interior grid.
pub fn admissible_sizes(levels: usize, count: usize) -> Vec<usize> {
    let f = 1usize << (levels.max(1) - 1);
    (2..2 + count).map(|k| k * f - 1).collect()
}

pub fn build_hierarchy(spec: &ConvDiffSpec, levels: usize) -> Result<GridHierarchy> {
    if levels == 0 {
        return Err(MgError::NoLevels);
    }
    spec.validate()?;
    let f = 1usize << (levels - 1);
    if (spec.n + 1) % f != 0 || (spec.n + 1) / f < 2 {
        return Err(MgError::IncompatibleSize { n: spec.n, levels, admissible: admissible_sizes(levels, 5) });
    }
    let mut n = (spec.n + 1) / f - 1;
    let mut out = Vec::with_capacity(levels);
    for j in 0..levels {
        let (a, _) = convdiff_matrix(&spec.with_n(n))?;
        let (prolongation, restriction) = if j == 0 {
            (None, None)
        } else {
            let nc = (n - 1) / 2;
            (Some(prolongation_matrix(nc)), Some(restriction_matrix(nc)))
        };
        out.push(Level { n, diag: a.diagonal(), a, prolongation, restriction, deflation: None, contour: None });
        n = 2 * n + 1;
    }
    let coarse_lu = DenseLu::factor(&out[0].a.to_dense()).map_err(|_| MgError::SingularCoarse)?;
    Ok(GridHierarchy { levels: out, coarse_lu, spec: spec.clone() })
}

/// Construction of the per-level deflation subspaces for the GMRES rougher.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RougherSetup {
    /// Target number of eigenvalues nearest the origin to enclose on each level.
    pub nev: usize,
    pub q: usize,
    pub seed: u64,
}

impl Default for RougherSetup {
    fn default() -> Self {
        Self { nev: 8, q: 32, seed: 0 }
    }
}

/// Disk about the origin whose radius splits the sorted moduli at the widest
/// relative gap among positions `nev..=2 nev`; returns the contour and the count inside.
///
/// Capping the count at `2 nev` keeps the rougher's coarse space small when the
/// moduli are tightly clustered.
fn origin_contour(eigenvalues: &[C64], nev: usize, q: usize) -> Option<(ContourSpec, usize)> {
    let mut mods: Vec<f64> = eigenvalues.iter().map(|l| l.norm()).collect();
    mods.sort_by(f64::total_cmp);
    let lo = nev.max(1);
    let hi = (2 * lo).min(mods.len() - 1);
    if lo > hi {
        return None;
    }
    let s = (lo..=hi).max_by(|&a, &b| {
        let gap = |k: usize| (mods[k] - mods[k - 1]) / mods[k];
        gap(a).total_cmp(&gap(b)).then(b.cmp(&a))
    })?;
    if mods[s] == mods[s - 1] {
        return None;
    }
    let radius = 0.5 * (mods[s - 1] + mods[s]);
    ContourSpec::new(C64::new(0.0, 0.0), radius, q).ok().map(|g| (g, s))
}

impl GridHierarchy {
    pub fn finest(&self) -> &Level {
        self.levels.last().expect("at least one level")
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Build `Z` on every level above the coarsest by contour quadrature
    /// around that level's eigenvalues nearest the origin.
    ///
    /// The contour radius is read off a dense eigenvalue computation, so each
    /// smoothed level must have at most `DEFAULT_DENSE_CAP` unknowns.
    pub fn setup_deflated_rougher(&mut self, setup: &RougherSetup) -> Result<()> {
        for (j, level) in self.levels.iter_mut().enumerate().skip(1) {
            let nn = level.unknowns();
            if nn > DEFAULT_DENSE_CAP {
                return Err(MgError::Deflation {
                    level: j,
                    source: crate::oracle::OracleError::TooLarge { n: nn, cap: DEFAULT_DENSE_CAP }.into(),
                });
            }
            let ev = dense_eigenvalues(&level.a.to_dense()).map_err(|e| MgError::Deflation { level: j, source: e.into() })?;
            let Some((gamma, s)) = origin_contour(&ev, setup.nev.min(nn / 4).max(1), setup.q) else {
                continue;
            };
            let m = default_m(s).min(nn);
            let y = random_block(nn, m, setup.seed.wrapping_add(j as u64));
            let (zraw, _) = contour_subspace_with(&level.a, &y, &gamma, &ContourOptions::for_dimension(nn))
                .map_err(|e| MgError::Deflation { level: j, source: e })?;
            let d = build_subspace(&level.a, &zraw).map_err(|e| MgError::Deflation { level: j, source: e })?;
            level.deflation = Some(d);
            level.contour = Some(gamma);
        }
        Ok(())
    }
}
