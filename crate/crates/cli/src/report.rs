use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use anyhow::Context;
use hullsep::SeparationReport;
use serde::{Deserialize, Serialize};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecompositionSummary {
    pub strategy: String,
    pub l1: usize,
    pub l2: usize,
    pub valid: bool,
    pub min_distance: f64,
    pub offending: Option<(usize, usize)>,
    pub projections_used: usize,
    pub peel_iterations: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeltaRow {
    pub activation: String,
    pub parts: usize,
    pub min_delta: f64,
    /// Diameter bound used (leaky kinds only).
    pub diameter: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub name: String,
    pub labels: (String, String),
    pub n1: usize,
    pub n2: usize,
    pub dim: usize,
}

/// Machine-readable record of one CLI run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub version: String,
    pub command: String,
    pub seed: u64,
    pub params: serde_json::Value,
    pub dataset: Option<DatasetSummary>,
    pub decomposition: Option<DecompositionSummary>,
    /// Hull distance between the two raw classes.
    pub raw_delta: Option<f64>,
    pub delta_table: Vec<DeltaRow>,
    pub hidden_sizes: Option<(usize, usize)>,
    pub construction: Option<SeparationReport>,
    pub timings_ms: BTreeMap<String, f64>,
}

impl RunReport {
    pub fn new(command: &str, seed: u64, params: serde_json::Value) -> Self {
        Self {
            schema_version: REPORT_SCHEMA_VERSION,
            version: hullsep::VERSION.to_string(),
            command: command.to_string(),
            seed,
            params,
            dataset: None,
            decomposition: None,
            raw_delta: None,
            delta_table: Vec::new(),
            hidden_sizes: None,
            construction: None,
            timings_ms: BTreeMap::new(),
        }
    }

    /// Runs `f`, recording its wall time under `stage`.
    pub fn time<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let out = f();
        self.timings_ms
            .insert(stage.to_string(), t.elapsed().as_secs_f64() * 1e3);
        out
    }

    pub fn write(&self, path: &Path) -> anyhow::Result<()> {
        let s = serde_json::to_string_pretty(self)?;
        std::fs::write(path, s).with_context(|| format!("writing {}", path.display()))
    }
}
