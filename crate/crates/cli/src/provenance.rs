use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Serialize)]
struct FileDigest {
    name: String,
    sha256: String,
}

/// Reproducibility record written next to every run's outputs.
///
/// Files are recorded by name only, never by directory, so that the same
/// run in two locations yields the same record. No timestamps.
#[derive(Debug, Serialize)]
pub struct Provenance {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    seed: Option<u64>,
    config: serde_json::Value,
    inputs: Vec<FileDigest>,
    outputs: Vec<FileDigest>,
    results: serde_json::Map<String, serde_json::Value>,
}

impl Provenance {
    pub fn new(command: &'static str, config: impl Serialize, seed: Option<u64>) -> Result<Self> {
        Ok(Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command,
            seed,
            config: serde_json::to_value(config)?,
            inputs: Vec::new(),
            outputs: Vec::new(),
            results: serde_json::Map::new(),
        })
    }

    /// Reads an input file, records its digest and returns the bytes.
    pub fn read_input(&mut self, path: &Path) -> Result<Vec<u8>> {
        let bytes = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
        self.inputs.push(FileDigest {
            name: file_name(path),
            sha256: sha256_hex(&bytes),
        });
        Ok(bytes)
    }

    /// Writes an output file and records its digest.
    pub fn write_output(&mut self, path: &Path, bytes: &[u8]) -> Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        }
        fs::write(path, bytes).with_context(|| format!("cannot write {}", path.display()))?;
        self.outputs.push(FileDigest {
            name: file_name(path),
            sha256: sha256_hex(bytes),
        });
        Ok(())
    }

    pub fn result(&mut self, key: &str, value: impl Serialize) -> Result<()> {
        self.results
            .insert(key.to_owned(), serde_json::to_value(value)?);
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut bytes = serde_json::to_vec_pretty(self)?;
        bytes.push(b'\n');
        fs::write(path, bytes).with_context(|| format!("cannot write {}", path.display()))
    }
}

fn file_name(path: &Path) -> String {
    path.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// `out.csv` -> `out.csv.provenance.json`
pub fn sidecar(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".provenance.json");
    PathBuf::from(name)
}
