//! JSON run reports: every subcommand emits one, recording the library
//! version, a hash of the canonical config, wall time, output paths, and the
//! metrics it checked. The structure is pinned by `schema/report.schema.json`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub version: String,
    pub subcommand: String,
    pub config: BTreeMap<String, serde_json::Value>,
    pub config_hash: String,
    pub wall_time_s: f64,
    pub outputs: BTreeMap<String, String>,
    pub metrics: BTreeMap<String, f64>,
}

impl RunReport {
    pub fn new(subcommand: &str, config: BTreeMap<String, serde_json::Value>) -> Self {
        let canonical = serde_json::to_string(&config).expect("config serializes");
        let mut hasher = Sha256::new();
        hasher.update(canonical.as_bytes());
        let config_hash = format!("{:x}", hasher.finalize());
        RunReport {
            version: env!("CARGO_PKG_VERSION").to_string(),
            subcommand: subcommand.to_string(),
            config,
            config_hash,
            wall_time_s: 0.0,
            outputs: BTreeMap::new(),
            metrics: BTreeMap::new(),
        }
    }

    pub fn output(&mut self, key: &str, path: &Path) {
        self.outputs.insert(key.to_string(), path.display().to_string());
    }

    pub fn metric(&mut self, key: &str, value: f64) {
        self.metrics.insert(key.to_string(), value);
    }

    pub fn emit(&self, target: Option<&Path>) -> std::io::Result<()> {
        let text = serde_json::to_string_pretty(self).expect("report serializes");
        match target {
            Some(p) => std::fs::write(p, text + "\n"),
            None => {
                println!("{text}");
                Ok(())
            }
        }
    }
}

/// Build the config map from key/value pairs.
#[macro_export]
macro_rules! config_map {
    ($($k:expr => $v:expr),* $(,)?) => {{
        let mut m = std::collections::BTreeMap::new();
        $( m.insert($k.to_string(), serde_json::json!($v)); )*
        m
    }};
}
