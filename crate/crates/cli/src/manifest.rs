use std::collections::BTreeMap;
use std::path::Path;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

/// Provenance recorded next to every result: enough to rerun it and get the
/// same bytes.
#[derive(Debug, Default)]
pub struct RunManifest {
    command: Vec<String>,
    inputs: BTreeMap<String, String>,
    mode: &'static str,
    tolerances: BTreeMap<&'static str, Value>,
    seed: Option<u64>,
}

impl RunManifest {
    pub fn new(command: Vec<String>, mode: &'static str) -> Self {
        Self { command, mode, ..Self::default() }
    }

    pub fn input(&mut self, path: &Path, bytes: &[u8]) {
        self.inputs.insert(path.display().to_string(), hex::encode(Sha256::digest(bytes)));
    }

    pub fn tolerance(&mut self, name: &'static str, value: Value) {
        self.tolerances.insert(name, value);
    }

    pub fn seed(&mut self, seed: u64) {
        self.seed = Some(seed);
    }

    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "inputs": self.inputs,
            "mode": self.mode,
            "tolerances": self.tolerances,
            "seed": self.seed,
            "versions": {
                "exch": env!("CARGO_PKG_VERSION"),
                "exchangeable": exchangeable::VERSION,
            },
        })
    }
}
