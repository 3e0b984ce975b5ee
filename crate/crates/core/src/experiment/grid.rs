// Copyright 2026 The lcdiscard Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Experiment grid configuration.
//!
//! ```toml
//! out = "results"
//! seeds = [0, 1, 2]
//!
//! [[benchmarks]]
//! path = "bench.csv"
//! schema = "canonical"
//!
//! [[policies]]
//! kind = "iepoch"
//! values = [1, 100]
//!
//! [[policies]]
//! kind = "lce"            # no values: the default sweep
//!
//! [engine]
//! check_every = 1
//! ```
//!
//! Every field has a default; relative paths resolve against the grid file's
//! directory.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::lce::EngineConfig;
use crate::policy::{PolicyKind, PolicySpec};
use crate::simulator::{DEFAULT_ITERATIONS, DEFAULT_TOP_K};

pub const LCE_SWEEP: [f64; 5] = [0.5, 0.7, 0.8, 0.9, 0.95];
pub const SHA_SWEEP: [f64; 8] = [1.19, 1.41, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0];

/// Seeds 0..=9. These are not the seeds behind any published figure.
pub fn default_seeds() -> Vec<u64> {
    (0..10).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchmarkEntry {
    pub path: PathBuf,
    #[serde(default = "canonical_schema")]
    pub schema: String,
}

fn canonical_schema() -> String {
    "canonical".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicySweep {
    pub kind: PolicyKind,
    /// Aggressiveness values; `None` selects the default sweep.
    #[serde(default)]
    pub values: Option<Vec<f64>>,
}

impl PolicySweep {
    /// Concrete policies for a benchmark with horizon `i_max`.
    pub fn expand(&self, i_max: u32) -> Result<Vec<PolicySpec>, ExperimentError> {
        let values: Vec<f64> = match (&self.values, self.kind) {
            (Some(v), _) => v.clone(),
            (None, PolicyKind::IEpoch) => (1..=i_max).map(f64::from).collect(),
            (None, PolicyKind::Sha) => SHA_SWEEP.to_vec(),
            (None, PolicyKind::Lce) => LCE_SWEEP.to_vec(),
        };
        values
            .into_iter()
            .map(|v| PolicySpec::from_parts(self.kind, v).map_err(|e| ExperimentError::Config(e.to_string())))
            .collect()
    }
}

fn default_policies() -> Vec<PolicySweep> {
    PolicyKind::ALL
        .iter()
        .map(|&kind| PolicySweep { kind, values: None })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentGrid {
    pub out: PathBuf,
    pub n_iterations: usize,
    pub top_k: usize,
    pub seeds: Vec<u64>,
    pub jobs: Option<usize>,
    pub benchmarks: Vec<BenchmarkEntry>,
    pub policies: Vec<PolicySweep>,
    pub engine: EngineConfig,
}

impl Default for ExperimentGrid {
    fn default() -> Self {
        Self {
            out: PathBuf::from("results"),
            n_iterations: DEFAULT_ITERATIONS,
            top_k: DEFAULT_TOP_K,
            seeds: default_seeds(),
            jobs: None,
            benchmarks: Vec::new(),
            policies: default_policies(),
            engine: EngineConfig::default(),
        }
    }
}

impl ExperimentGrid {
    pub fn from_toml(text: &str, base_dir: &Path) -> Result<Self, ExperimentError> {
        let mut grid: ExperimentGrid = toml::from_str(text).map_err(|e| ExperimentError::Config(e.to_string()))?;
        grid.resolve_paths(base_dir);
        grid.validate()?;
        Ok(grid)
    }

    pub fn from_file(path: &Path) -> Result<Self, ExperimentError> {
        let text = fs::read_to_string(path).map_err(|e| ExperimentError::io(path, e))?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Self::from_toml(&text, base)
    }

    fn resolve_paths(&mut self, base: &Path) {
        if self.out.is_relative() {
            self.out = base.join(&self.out);
        }
        for b in &mut self.benchmarks {
            if b.path.is_relative() {
                b.path = base.join(&b.path);
            }
        }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let fail = |m: &str| Err(ExperimentError::Config(m.to_string()));
        if self.benchmarks.is_empty() {
            return fail("grid lists no benchmarks");
        }
        if self.policies.is_empty() {
            return fail("grid lists no policies");
        }
        if self.seeds.is_empty() {
            return fail("grid lists no seeds");
        }
        let distinct: HashSet<_> = self.seeds.iter().collect();
        if distinct.len() != self.seeds.len() {
            return fail("seeds must be distinct");
        }
        if self.n_iterations == 0 || self.top_k == 0 {
            return fail("n_iterations and top_k must be >= 1");
        }
        if self.jobs == Some(0) {
            return fail("jobs must be >= 1");
        }
        self.engine
            .mcmc
            .validate()
            .map_err(|e| ExperimentError::Config(e.to_string()))?;
        if self.engine.check_every == 0 {
            return fail("engine.check_every must be >= 1");
        }
        // horizon-dependent limits (i <= i_max) are checked per benchmark
        for sweep in &self.policies {
            let Some(values) = &sweep.values else { continue };
            if values.is_empty() {
                return fail(&format!("empty value list for {}", sweep.kind));
            }
            for v in values {
                PolicySpec::from_parts(sweep.kind, *v)
                    .and_then(|spec| spec.validate(u32::MAX))
                    .map_err(|e| ExperimentError::Config(e.to_string()))?;
            }
        }
        Ok(())
    }
}
