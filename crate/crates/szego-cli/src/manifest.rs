use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Everything that determines a run. Output location is deliberately not part of
/// the hash, so reruns into different directories produce identical files.
#[derive(Debug, Clone)]
pub struct ExperimentManifest {
    pub command: String,
    pub config_path: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub seed: u64,
    pub version: String,
    /// Effective configuration after overrides.
    pub config: Value,
}

impl ExperimentManifest {
    pub fn hash(&self) -> String {
        let canonical = serde_json::json!({
            "command": self.command,
            "config": self.config,
            "seed": self.seed,
            "version": self.version,
        });
        hex::encode(Sha256::digest(canonical.to_string().as_bytes()))
    }

    /// Stamp embedded in every JSON output.
    pub fn stamp(&self) -> Value {
        serde_json::json!({
            "command": self.command,
            "seed": self.seed,
            "tool_version": self.version,
            "manifest_hash": self.hash(),
        })
    }

    /// Comment lines embedded in every text output.
    pub fn header(&self) -> Vec<String> {
        vec![
            format!("szego {} {}", self.version, self.command),
            format!("manifest {}", self.hash()),
            format!("seed {}", self.seed),
        ]
    }

    pub fn typed<T: DeserializeOwned>(&self) -> Result<T> {
        serde_json::from_value(self.config.clone()).map_err(|e| CliError::Config(e.to_string()))
    }
}

/// Loads a JSON config, or serializes `default` when no path is given.
pub fn load_config<T: Serialize>(path: Option<&Path>, default: &T) -> Result<Value> {
    match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::io(p, e))?;
            serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))
        }
        None => serde_json::to_value(default).map_err(|e| CliError::Config(e.to_string())),
    }
}

/// Applies `a.b.c=value`. The value is parsed as JSON when possible and kept as a
/// string otherwise. Missing intermediate objects are created; the typed parse
/// rejects unknown keys afterwards.
pub fn apply_override(config: &mut Value, spec: &str) -> Result<()> {
    let (path, raw) = spec
        .split_once('=')
        .ok_or_else(|| CliError::Usage(format!("override `{spec}` must have the form key=value")))?;
    let keys: Vec<&str> = path.split('.').collect();
    if keys.iter().any(|k| k.is_empty()) {
        return Err(CliError::Usage(format!("override `{spec}` has an empty key")));
    }
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut node = config;
    for (i, key) in keys.iter().enumerate() {
        let obj = match node {
            Value::Object(m) => m,
            _ => return Err(CliError::Usage(format!("override `{spec}`: `{}` is not an object", keys[..i].join(".")))),
        };
        if i + 1 == keys.len() {
            obj.insert(key.to_string(), value);
            return Ok(());
        }
        node = obj.entry(key.to_string()).or_insert_with(|| Value::Object(Map::new()));
    }
    Ok(())
}
