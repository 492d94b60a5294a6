//! Run manifests and atomic file output.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::Failure;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Settings {
    pub workers: usize,
    pub verify: bool,
    pub tolerance: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FileEntry {
    pub path: String,
    pub bytes: usize,
    pub sha256: String,
}

/// Outcome of comparing the analytic path with the dense oracle.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Verification {
    /// Number of spectra (or 2D diagonalizations) compared.
    pub checked: usize,
    /// Largest distance relative to `max(1, spectral radius)`.
    pub worst: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    /// Every config key with its resolved value; accepted back by `--config`.
    pub config: BTreeMap<String, String>,
    pub settings: Settings,
    pub files: Vec<FileEntry>,
    /// Scalar results worth keeping next to the data (crossovers, endpoint
    /// checks, failure counts).
    #[serde(default)]
    pub summary: BTreeMap<String, serde_json::Value>,
    #[serde(default)]
    pub verification: Option<Verification>,
}

pub fn sha256_hex(data: &[u8]) -> String {
    Sha256::digest(data).iter().map(|b| format!("{b:02x}")).collect()
}

/// Writes through a temporary file in the same directory, then renames it
/// into place, so readers never see a partial file.
pub fn write_atomic(dir: &Path, name: &str, data: &[u8]) -> Result<FileEntry, Failure> {
    let io = |e: std::io::Error| Failure::Io(format!("{}: {e}", dir.join(name).display()));
    let mut tmp = tempfile::Builder::new()
        .prefix(&format!(".{name}."))
        .tempfile_in(dir)
        .map_err(io)?;
    tmp.write_all(data).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(dir.join(name)).map_err(|e| io(e.error))?;
    Ok(FileEntry {
        path: name.to_string(),
        bytes: data.len(),
        sha256: sha256_hex(data),
    })
}
