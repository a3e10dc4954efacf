use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::contour::ContourSpec;
use super::{DeflationError, Result};
use crate::sparse::DenseMatrix;
use crate::C64;

/// JSON sidecar describing a stored `Z`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubspaceMeta {
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub contour: ContourSpec,
    pub q: usize,
}

fn sidecar(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

/// Write `Z` as column-major little-endian `(re, im)` f64 pairs to `path`
/// and its metadata to `path.json`.
pub fn save_z(path: &Path, z: &DenseMatrix, meta: &SubspaceMeta) -> Result<()> {
    if meta.n != z.nrows() || meta.m != z.ncols() {
        return Err(DeflationError::Persist(format!(
            "metadata says {}x{}, matrix is {}x{}",
            meta.n,
            meta.m,
            z.nrows(),
            z.ncols()
        )));
    }
    let mut bytes = Vec::with_capacity(16 * z.as_slice().len());
    for v in z.as_slice() {
        bytes.extend_from_slice(&v.re.to_le_bytes());
        bytes.extend_from_slice(&v.im.to_le_bytes());
    }
    fs::write(path, bytes)?;
    let json = serde_json::to_string_pretty(meta).map_err(|e| DeflationError::Persist(e.to_string()))?;
    fs::write(sidecar(path), json)?;
    Ok(())
}

pub fn load_z(path: &Path) -> Result<(DenseMatrix, SubspaceMeta)> {
    let meta: SubspaceMeta = serde_json::from_str(&fs::read_to_string(sidecar(path))?)
        .map_err(|e| DeflationError::Persist(e.to_string()))?;
    let bytes = fs::read(path)?;
    let expected = 16 * meta.n * meta.m;
    if bytes.len() != expected {
        return Err(DeflationError::Persist(format!("expected {expected} bytes, found {}", bytes.len())));
    }
    let data: Vec<C64> = bytes
        .chunks_exact(16)
        .map(|ch| {
            let re = f64::from_le_bytes(ch[..8].try_into().expect("8 bytes"));
            let im = f64::from_le_bytes(ch[8..].try_into().expect("8 bytes"));
            C64::new(re, im)
        })
        .collect();
    let z = DenseMatrix::from_col_major(meta.n, meta.m, data).map_err(|e| DeflationError::Persist(e.to_string()))?;
    Ok((z, meta))
}
