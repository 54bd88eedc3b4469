//! Run manifests: what was run, with which parameters, and what it wrote.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use resonate::Result;

#[derive(Debug, Serialize)]
pub struct Artifact {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub wall_time_ms: u128,
    pub started_unix: u64,
    pub artifacts: Vec<Artifact>,
    pub counts: BTreeMap<String, u64>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// `out.jsonl` → `out.jsonl.manifest.json`.
pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out
        .file_name()
        .map(|n| n.to_os_string())
        .unwrap_or_default();
    name.push(".manifest.json");
    out.with_file_name(name)
}

impl Manifest {
    pub fn write(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).expect("manifest serializes") + "\n";
        std::fs::write(path, text)?;
        Ok(())
    }
}

pub fn artifact(path: &Path, data: &[u8]) -> Artifact {
    Artifact {
        path: path.display().to_string(),
        sha256: sha256_hex(data),
        bytes: data.len() as u64,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_and_path() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
        assert_eq!(
            manifest_path(Path::new("runs/s.jsonl")),
            PathBuf::from("runs/s.jsonl.manifest.json")
        );
    }
}
