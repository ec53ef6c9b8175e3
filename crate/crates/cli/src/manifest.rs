use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::CliResult;

#[derive(Debug, Clone, Serialize)]
pub struct FileDigest {
    /// File path, or `builtin:<name>` for bundled data.
    pub source: String,
    pub sha256: String,
}

impl FileDigest {
    pub fn of_bytes(source: impl Into<String>, bytes: &[u8]) -> Self {
        FileDigest {
            source: source.into(),
            sha256: hex::encode(Sha256::digest(bytes)),
        }
    }
}

/// Written next to every output set.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub tool_version: String,
    pub timestamp: String,
    pub config: serde_json::Value,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
}

impl RunManifest {
    pub fn new(subcommand: &str, config: serde_json::Value) -> Self {
        RunManifest {
            subcommand: subcommand.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            config,
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn input(&mut self, d: FileDigest) {
        self.inputs.push(d);
    }

    /// Write `bytes` to `dir/name` and record its digest.
    pub fn emit(&mut self, dir: &Path, name: &str, bytes: &[u8]) -> CliResult<PathBuf> {
        let path = dir.join(name);
        fs::write(&path, bytes)?;
        self.outputs.push(FileDigest::of_bytes(name, bytes));
        Ok(path)
    }

    pub fn write(&self, dir: &Path) -> CliResult<()> {
        let text = serde_json::to_string_pretty(self).map_err(pfl_core::Error::from)?;
        fs::write(dir.join(format!("manifest_{}.json", self.subcommand)), text)?;
        Ok(())
    }
}
