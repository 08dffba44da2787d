pub mod passivity;
pub mod perturb;
pub mod region;
pub mod solve;

use std::collections::BTreeMap;
use std::path::PathBuf;

use hamriccati::Tolerances;
use serde_json::{Map, Value};

use crate::manifest::RunManifest;

/// Settings shared by every subcommand.
pub struct Context {
    pub tol: Tolerances<f64>,
    pub overrides: BTreeMap<String, f64>,
    pub out: Option<PathBuf>,
}

/// A finished command: the bytes to write and, for CSV outputs, the manifest
/// to place beside them.
pub enum Output {
    Json(Value),
    Csv { bytes: Vec<u8>, manifest: RunManifest },
}

/// `{"manifest": …}` followed by the report fields.
pub fn report(manifest: &RunManifest, fields: Map<String, Value>) -> Value {
    let mut m = Map::new();
    m.insert("manifest".into(), manifest.to_json());
    m.extend(fields);
    Value::Object(m)
}
