//! Machine-readable run reports shared by the CLI tasks.

use serde::Serialize;
use std::collections::BTreeMap;

pub const SCHEMA_VERSION: u32 = 1;

/// One task's report: parameters in, results out, pass/fail verdict.
/// Field order is fixed so serialized reports are byte-stable.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub task: String,
    pub params: BTreeMap<String, serde_json::Value>,
    pub results: BTreeMap<String, serde_json::Value>,
    pub tolerances: BTreeMap<String, f64>,
    pub pass: bool,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_s: Option<f64>,
}

impl RunReport {
    pub fn new(task: &str, seed: u64) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            task: task.to_string(),
            params: BTreeMap::new(),
            results: BTreeMap::new(),
            tolerances: BTreeMap::new(),
            pass: true,
            seed,
            wall_time_s: None,
        }
    }

    pub fn param(&mut self, key: &str, v: impl Into<serde_json::Value>) -> &mut Self {
        self.params.insert(key.to_string(), v.into());
        self
    }

    pub fn result(&mut self, key: &str, v: impl Into<serde_json::Value>) -> &mut Self {
        self.results.insert(key.to_string(), v.into());
        self
    }

    pub fn tolerance(&mut self, key: &str, v: f64) -> &mut Self {
        self.tolerances.insert(key.to_string(), v);
        self
    }

    /// Record one asserted condition; the report fails if any fails.
    pub fn check(&mut self, name: &str, ok: bool) -> &mut Self {
        self.results.insert(format!("check_{name}"), ok.into());
        self.pass &= ok;
        self
    }
}
