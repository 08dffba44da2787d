//! Run manifests: everything that determines the bytes of an output.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

use crate::io::Input;

#[derive(Clone, Debug, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub options: BTreeMap<String, Value>,
    pub inputs: Vec<InputDigest>,
    /// Tolerances set on the command line; all others are library defaults.
    pub tolerance_overrides: BTreeMap<String, f64>,
    pub seed: Option<u64>,
}

impl RunManifest {
    pub fn new(command: &str, tolerance_overrides: &BTreeMap<String, f64>) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            options: BTreeMap::new(),
            inputs: Vec::new(),
            tolerance_overrides: tolerance_overrides.clone(),
            seed: None,
        }
    }

    pub fn input(mut self, input: &Input) -> Self {
        self.inputs.push(InputDigest { path: input.path.display().to_string(), sha256: input.sha256.clone() });
        self
    }

    pub fn option(mut self, key: &str, value: impl Serialize) -> Self {
        self.options.insert(key.to_string(), serde_json::to_value(value).expect("option serializes"));
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("manifest serializes")
    }
}
