use cdefl::SparseMatrix;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::RunConfig;

/// Identifies the exact inputs and build behind a report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    /// SHA-256 over the CSR arrays (dimensions, row pointers, columns, values).
    pub matrix_sha256: String,
    /// SHA-256 of the JSON config with output paths removed.
    pub config_sha256: String,
    pub version: String,
}

impl Provenance {
    pub fn new(a: &SparseMatrix, cfg: &RunConfig) -> Self {
        Self {
            matrix_sha256: matrix_checksum(a),
            config_sha256: config_checksum(cfg),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

pub fn matrix_checksum(a: &SparseMatrix) -> String {
    let mut h = Sha256::new();
    h.update((a.nrows() as u64).to_le_bytes());
    h.update((a.ncols() as u64).to_le_bytes());
    for &p in a.row_ptr() {
        h.update((p as u64).to_le_bytes());
    }
    for &c in a.col_idx() {
        h.update((c as u64).to_le_bytes());
    }
    for v in a.values() {
        h.update(v.re.to_le_bytes());
        h.update(v.im.to_le_bytes());
    }
    hex::encode(h.finalize())
}

pub fn config_checksum(cfg: &RunConfig) -> String {
    let mut c = cfg.clone();
    c.output = None;
    c.history_csv = None;
    let json = serde_json::to_vec(&c).expect("config serializes");
    hex::encode(Sha256::digest(json))
}
