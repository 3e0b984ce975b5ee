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

//! Experiment orchestration behind the command-line tool: benchmark
//! generation and ingestion, grid simulation with resume, and analysis
//! reports.

mod grid;
mod report;
mod runner;
pub mod table;

use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::curves::{self, CurveError, FilterReport, Schema, SyntheticSpec};
use crate::moo::MooError;

pub use grid::{default_seeds, BenchmarkEntry, ExperimentGrid, PolicySweep, LCE_SWEEP, SHA_SWEEP};
pub use report::{analyze, AnalyzeSummary};
pub use runner::{cell_digest, simulate, CellFailure, SimulateReport, MANIFEST_FILE};

/// Process exit codes of the command-line tool.
pub mod exit_code {
    pub const SUCCESS: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const PARTIAL_FAILURE: i32 = 2;
    pub const IO: i32 = 3;
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed table {path}: {message}")]
    Table { path: PathBuf, message: String },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("missing input: {0}")]
    MissingInput(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Moo(#[from] MooError),
    #[error("{failed} of {total} cells failed")]
    PartialFailure { failed: usize, total: usize },
}

impl ExperimentError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub(crate) fn csv(path: &Path, err: csv::Error) -> Self {
        Self::Table {
            path: path.to_path_buf(),
            message: err.to_string(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            ExperimentError::Io { .. } | ExperimentError::MissingInput(_) => exit_code::IO,
            ExperimentError::Curve(CurveError::Io { .. }) => exit_code::IO,
            ExperimentError::PartialFailure { .. } => exit_code::PARTIAL_FAILURE,
            _ => exit_code::USAGE,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenerateSummary {
    pub curves: usize,
    pub i_max: u32,
    pub worse_than_constant_fraction: f64,
    pub first_final_spearman: f64,
}

/// Reads a synthetic spec (TOML) and writes the canonical benchmark file.
pub fn generate(spec_path: &Path, out: &Path) -> Result<GenerateSummary, ExperimentError> {
    let text = fs::read_to_string(spec_path).map_err(|e| ExperimentError::io(spec_path, e))?;
    let spec: SyntheticSpec = toml::from_str(&text).map_err(|e| ExperimentError::Config(e.to_string()))?;
    let benchmark = curves::generate_synthetic(&spec)?;
    curves::canonical_export(&benchmark, out)?;
    Ok(GenerateSummary {
        curves: benchmark.len(),
        i_max: benchmark.i_max(),
        worse_than_constant_fraction: benchmark.worse_than_constant_fraction(),
        first_final_spearman: benchmark.rank_stability(),
    })
}

/// Loads an externally tabulated file under `schema` and rewrites it in the
/// canonical format.
pub fn ingest(input: &Path, schema: &str, out: &Path) -> Result<FilterReport, ExperimentError> {
    let schema: Schema = schema.parse()?;
    let (benchmark, report) = curves::load_benchmark(input, schema)?;
    curves::canonical_export(&benchmark, out)?;
    Ok(report)
}
