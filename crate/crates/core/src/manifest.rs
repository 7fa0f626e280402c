//! Run manifests and flat key-value configuration files.
//!
//! Every pipeline command emits one manifest recording its configuration
//! snapshot plus content digests of all inputs and outputs. Two runs with
//! equal config and input digests must produce equal output digests, which
//! makes byte-exact reproduction checkable from the manifests alone.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

pub fn sha256_bytes(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn sha256_file(path: impl AsRef<Path>) -> Result<String> {
    let mut file = std::fs::File::open(path)?;
    let mut hasher = Sha256::new();
    let mut buffer = [0u8; 64 * 1024];
    loop {
        let read = file.read(&mut buffer)?;
        if read == 0 {
            break;
        }
        hasher.update(&buffer[..read]);
    }
    Ok(hex::encode(hasher.finalize()))
}

/// Short digest of a backend URL; tokens and credentials never appear in
/// manifests.
pub fn fingerprint_url(url: &str) -> String {
    sha256_bytes(url.as_bytes())[..16].to_string()
}

/// Record of one CLI run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub argv: Vec<String>,
    pub tool_version: String,
    pub started_at: String,
    pub finished_at: String,
    /// Effective configuration snapshot (seed, batch sizes, modes, backend
    /// fingerprint, ...).
    pub config: BTreeMap<String, String>,
    /// Input path -> sha256.
    pub inputs: BTreeMap<String, String>,
    /// Output path -> sha256.
    pub outputs: BTreeMap<String, String>,
}

impl RunManifest {
    pub fn new(command: &str, argv: Vec<String>, tool_version: &str) -> Self {
        RunManifest {
            command: command.to_string(),
            argv,
            tool_version: tool_version.to_string(),
            started_at: now_rfc3339(),
            finished_at: String::new(),
            config: BTreeMap::new(),
            inputs: BTreeMap::new(),
            outputs: BTreeMap::new(),
        }
    }

    pub fn set_config(&mut self, key: &str, value: impl ToString) {
        self.config.insert(key.to_string(), value.to_string());
    }

    pub fn add_input(&mut self, path: impl AsRef<Path>) -> Result<()> {
        let digest = sha256_file(&path)?;
        self.inputs
            .insert(path.as_ref().display().to_string(), digest);
        Ok(())
    }

    pub fn add_output(&mut self, path: impl AsRef<Path>) -> Result<()> {
        let digest = sha256_file(&path)?;
        self.outputs
            .insert(path.as_ref().display().to_string(), digest);
        Ok(())
    }

    /// Stamp the finish time and write the manifest as pretty JSON.
    pub fn finish(mut self, path: impl AsRef<Path>) -> Result<()> {
        self.finished_at = now_rfc3339();
        std::fs::write(path, serde_json::to_string_pretty(&self)?)?;
        Ok(())
    }
}

fn now_rfc3339() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

/// Parse a flat `key = value` configuration file. Blank lines and lines
/// starting with `#` are ignored; later keys win.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut values = BTreeMap::new();
    for (line_number, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match line.split_once('=') {
            Some((key, value)) => {
                values.insert(key.trim().to_string(), value.trim().to_string());
            }
            None => {
                return Err(Error::Config(format!(
                    "line {}: expected key = value, got {line:?}",
                    line_number + 1
                )))
            }
        }
    }
    Ok(values)
}

pub fn load_config(path: impl AsRef<Path>) -> Result<BTreeMap<String, String>> {
    parse_config(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digests_are_stable() {
        assert_eq!(
            sha256_bytes(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
        assert_eq!(fingerprint_url("mock://1024").len(), 16);
        assert_eq!(fingerprint_url("mock://1024"), fingerprint_url("mock://1024"));
        assert_ne!(fingerprint_url("mock://1024"), fingerprint_url("mock://1025"));
    }

    #[test]
    fn config_parsing() {
        let parsed = parse_config("# comment\nseed = 1024\nbatch_size=40\n\nnorm = mean_per_token\n").unwrap();
        assert_eq!(parsed["seed"], "1024");
        assert_eq!(parsed["batch_size"], "40");
        assert_eq!(parsed["norm"], "mean_per_token");
        assert!(parse_config("not a pair").is_err());
    }

    #[test]
    fn manifest_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("in.txt");
        std::fs::write(&input, "hello").unwrap();

        let mut manifest = RunManifest::new("curate", vec!["--seed".into(), "1024".into()], "0.1.0");
        manifest.set_config("seed", 1024);
        manifest.add_input(&input).unwrap();
        let manifest_path = dir.path().join("run_manifest.json");
        manifest.finish(&manifest_path).unwrap();

        let loaded: RunManifest =
            serde_json::from_str(&std::fs::read_to_string(&manifest_path).unwrap()).unwrap();
        assert_eq!(loaded.command, "curate");
        assert_eq!(loaded.config["seed"], "1024");
        assert_eq!(loaded.inputs.len(), 1);
        assert!(!loaded.finished_at.is_empty());
    }
}
