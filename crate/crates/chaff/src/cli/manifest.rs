//! Run manifests: inputs, outputs, configuration, seed, counts.
//!
//! Every command writes one. A manifest deliberately contains no wall-clock
//! data, so reruns with identical inputs and seed produce byte-identical
//! manifests (and the hashes inside prove the primary outputs matched too).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::util::{sha256_file, write_atomic};

use super::{CliError, RunConfig};

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub command: String,
    pub tool_version: String,
    pub seed: u64,
    pub config: serde_json::Value,
    /// Input path -> SHA-256.
    pub inputs: BTreeMap<String, String>,
    /// Output path -> SHA-256.
    pub outputs: BTreeMap<String, String>,
    pub counts: BTreeMap<String, u64>,
    /// Command-specific extras (e.g. negative-sample digests).
    pub extra: BTreeMap<String, serde_json::Value>,
}

impl Manifest {
    pub fn new(command: &str, config: &RunConfig) -> Result<Self, CliError> {
        let config_echo = serde_json::to_value(config)
            .map_err(|e| CliError::Internal(format!("config echo: {e}")))?;
        Ok(Manifest {
            command: command.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            seed: config.seed,
            config: config_echo,
            inputs: BTreeMap::new(),
            outputs: BTreeMap::new(),
            counts: BTreeMap::new(),
            extra: BTreeMap::new(),
        })
    }

    pub fn add_input(&mut self, path: &Path) -> Result<(), CliError> {
        let hash = sha256_file(path)
            .map_err(|e| CliError::Internal(format!("hash {}: {e}", path.display())))?;
        self.inputs.insert(path.display().to_string(), hash);
        Ok(())
    }

    pub fn add_output(&mut self, path: &Path) -> Result<(), CliError> {
        let hash = sha256_file(path)
            .map_err(|e| CliError::Internal(format!("hash {}: {e}", path.display())))?;
        self.outputs.insert(path.display().to_string(), hash);
        Ok(())
    }

    pub fn count(&mut self, key: &str, value: u64) {
        self.counts.insert(key.to_string(), value);
    }

    pub fn extra_value(&mut self, key: &str, value: serde_json::Value) {
        self.extra.insert(key.to_string(), value);
    }

    /// Serializes the manifest to `path`, atomically.
    pub fn write(&self, path: &Path) -> Result<PathBuf, CliError> {
        let json = serde_json::to_string_pretty(self)
            .map_err(|e| CliError::Internal(format!("manifest serialize: {e}")))?;
        write_atomic(path, json.as_bytes())
            .map_err(|e| CliError::Internal(format!("manifest write: {e}")))?;
        Ok(path.to_path_buf())
    }
}
