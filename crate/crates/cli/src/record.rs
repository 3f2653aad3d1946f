//! Persisted, seed-stamped run records.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::CliResult;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub version: String,
    pub schema: String,
    pub command: String,
    pub params: BTreeMap<String, Value>,
    pub seed: Option<u64>,
    /// Primary results only; timings live in `started` and `elapsed_ms`.
    pub outputs: Value,
    pub started: String,
    pub elapsed_ms: f64,
}

impl RunRecord {
    /// Hash of everything that replay must reproduce.
    pub fn content_hash(&self) -> String {
        let body = json!({
            "command": self.command,
            "params": self.params,
            "seed": self.seed,
            "outputs": self.outputs,
        });
        let digest = Sha256::digest(body.to_string().as_bytes());
        hex::encode(digest)
    }

    pub fn file_name(&self) -> String {
        format!("{}-{}.json", self.command, &self.content_hash()[..16])
    }

    pub fn write_to(&self, dir: &Path) -> CliResult<PathBuf> {
        std::fs::create_dir_all(dir)?;
        let path = dir.join(self.file_name());
        std::fs::write(&path, serde_json::to_string_pretty(self)? + "\n")?;
        Ok(path)
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(elapsed_ms: f64) -> RunRecord {
        RunRecord {
            version: "0.1.0".into(),
            schema: SCHEMA_VERSION.into(),
            command: "vinogradov".into(),
            params: BTreeMap::from([("len".to_string(), json!(2))]),
            seed: None,
            outputs: json!({"J": 20}),
            started: "2026-01-01T00:00:00Z".into(),
            elapsed_ms,
        }
    }

    #[test]
    fn name_ignores_timing() {
        assert_eq!(sample(1.0).file_name(), sample(99.0).file_name());
        assert!(sample(1.0).file_name().starts_with("vinogradov-"));
        let mut other = sample(1.0);
        other.outputs = json!({"J": 21});
        assert_ne!(other.file_name(), sample(1.0).file_name());
    }

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = sample(3.5).write_to(dir.path()).unwrap();
        assert_eq!(RunRecord::read(&path).unwrap(), sample(3.5));
    }
}
