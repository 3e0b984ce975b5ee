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

//! Parallel, resumable execution of an experiment grid.
//!
//! Output layout, one directory per cell family:
//!
//! ```text
//! <out>/manifest.toml
//! <out>/<benchmark>/<kind>/<parameter>/seed-<seed>.anytime.csv
//! <out>/<benchmark>/<kind>/<parameter>/seed-<seed>.summary.csv
//! ```
//!
//! The summary is written last and carries the cell's configuration digest;
//! a cell whose summary exists with a matching digest is skipped on resume.

use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::table::write_table;
use super::{ExperimentError, ExperimentGrid};
use crate::curves::{load_benchmark, Benchmark, Schema};
use crate::lce::{EngineConfig, Extrapolator, RoberEngine};
use crate::policy::{PolicyKind, PolicySpec};
use crate::simulator::{self, RunConfig, SimulationTrace};

pub const MANIFEST_FILE: &str = "manifest.toml";
pub(crate) const SUMMARY_SUFFIX: &str = ".summary.csv";
pub(crate) const ANYTIME_SUFFIX: &str = ".anytime.csv";
pub(crate) const SUMMARY_HEADER: [&str; 6] = ["benchmark", "policy", "parameter", "seed", "y_l", "y_i"];
pub(crate) const ANYTIME_HEADER: [&str; 5] = [
    "iteration",
    "cumulative_epochs",
    "final_valid_error",
    "final_test_error",
    "selected_id",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub(crate) struct Manifest {
    pub benchmarks: Vec<ManifestEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub(crate) struct ManifestEntry {
    pub name: String,
    pub path: PathBuf,
    pub schema: String,
    pub digest: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellFailure {
    pub cell: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SimulateReport {
    pub total: usize,
    pub computed: usize,
    pub skipped: usize,
    pub failures: Vec<CellFailure>,
}

struct LoadedBenchmark {
    benchmark: Benchmark,
    digest: String,
    engine: Option<RoberEngine>,
}

struct Cell {
    bench: usize,
    policy: PolicySpec,
    seed: u64,
}

enum CellOutcome {
    Computed,
    Skipped,
}

/// Hex digest identifying everything that determines a cell's output.
pub fn cell_digest(
    benchmark_digest: &str,
    policy: &PolicySpec,
    seed: u64,
    n_iterations: usize,
    top_k: usize,
    engine: &EngineConfig,
) -> String {
    let mut h = Sha256::new();
    h.update(format!("benchmark={benchmark_digest}\npolicy={policy}\nseed={seed}\n"));
    h.update(format!("n_iterations={n_iterations}\ntop_k={top_k}\n"));
    if policy.kind() == PolicyKind::Lce {
        // the cache switch does not change results
        let relevant = EngineConfig {
            cache: true,
            ..engine.clone()
        };
        h.update(toml::to_string(&relevant).expect("engine config serializes"));
    }
    hex::encode(h.finalize())
}

pub(crate) fn cell_dir(out: &Path, benchmark: &str, policy: &PolicySpec) -> PathBuf {
    out.join(benchmark)
        .join(policy.kind().id())
        .join(policy.parameter_label())
}

fn provenance(digest: &str, seed: u64) -> String {
    format!("config_digest: {digest}, seed: {seed}")
}

fn existing_digest(table: &Path) -> Option<String> {
    let text = fs::read_to_string(table).ok()?;
    let first = text.lines().next()?;
    let rest = first.strip_prefix("# config_digest: ")?;
    Some(rest.split(',').next()?.trim().to_string())
}

fn load(grid: &ExperimentGrid) -> Result<Vec<LoadedBenchmark>, ExperimentError> {
    let needs_engine = grid.policies.iter().any(|p| p.kind == PolicyKind::Lce);
    let mut loaded = Vec::with_capacity(grid.benchmarks.len());
    for entry in &grid.benchmarks {
        let schema: Schema = entry.schema.parse()?;
        let bytes = fs::read(&entry.path).map_err(|e| ExperimentError::io(&entry.path, e))?;
        let (benchmark, report) = load_benchmark(&entry.path, schema)?;
        if report.dropped() > 0 {
            log::warn!("{}: {report}", entry.path.display());
        }
        let mut h = Sha256::new();
        h.update(entry.schema.as_bytes());
        h.update(&bytes);
        let engine = if needs_engine {
            Some(RoberEngine::new(grid.engine.clone()).map_err(|e| ExperimentError::Config(e.to_string()))?)
        } else {
            None
        };
        loaded.push(LoadedBenchmark {
            benchmark,
            digest: hex::encode(h.finalize()),
            engine,
        });
    }
    let mut names: Vec<&str> = loaded.iter().map(|l| l.benchmark.name()).collect();
    names.sort_unstable();
    if names.windows(2).any(|w| w[0] == w[1]) {
        return Err(ExperimentError::Config("benchmark names must be unique".into()));
    }
    Ok(loaded)
}

fn write_manifest(grid: &ExperimentGrid, loaded: &[LoadedBenchmark]) -> Result<(), ExperimentError> {
    let manifest = Manifest {
        benchmarks: grid
            .benchmarks
            .iter()
            .zip(loaded)
            .map(|(entry, l)| ManifestEntry {
                name: l.benchmark.name().to_string(),
                path: entry.path.clone(),
                schema: entry.schema.clone(),
                digest: l.digest.clone(),
            })
            .collect(),
    };
    fs::create_dir_all(&grid.out).map_err(|e| ExperimentError::io(&grid.out, e))?;
    let path = grid.out.join(MANIFEST_FILE);
    let text = toml::to_string(&manifest).map_err(|e| ExperimentError::Config(e.to_string()))?;
    fs::write(&path, text).map_err(|e| ExperimentError::io(&path, e))
}

pub(crate) fn read_manifest(results: &Path) -> Option<Manifest> {
    let text = fs::read_to_string(results.join(MANIFEST_FILE)).ok()?;
    toml::from_str(&text).ok()
}

fn write_trace(trace: &SimulationTrace, dir: &Path, digest: &str) -> Result<(), ExperimentError> {
    let seed = trace.config.seed;
    let prov = provenance(digest, seed);
    let anytime = trace.anytime.iter().map(|e| {
        vec![
            e.iteration.to_string(),
            e.cumulative_epochs.to_string(),
            e.final_valid_error.to_string(),
            e.final_test_error.to_string(),
            e.selected_id.clone(),
        ]
    });
    write_table(
        &dir.join(format!("seed-{seed}{ANYTIME_SUFFIX}")),
        &prov,
        &ANYTIME_HEADER,
        anytime,
    )?;
    let point = trace.objective();
    let summary = vec![vec![
        trace.benchmark.clone(),
        trace.config.policy.kind().id().to_string(),
        trace.config.policy.parameter_label(),
        seed.to_string(),
        point.y_l.to_string(),
        point.y_i.to_string(),
    ]];
    write_table(
        &dir.join(format!("seed-{seed}{SUMMARY_SUFFIX}")),
        &prov,
        &SUMMARY_HEADER,
        summary,
    )
}

fn run_cell(
    grid: &ExperimentGrid,
    loaded: &LoadedBenchmark,
    cell: &Cell,
    resume: bool,
) -> Result<CellOutcome, ExperimentError> {
    let bench = &loaded.benchmark;
    let digest = cell_digest(
        &loaded.digest,
        &cell.policy,
        cell.seed,
        grid.n_iterations,
        grid.top_k,
        &grid.engine,
    );
    let dir = cell_dir(&grid.out, bench.name(), &cell.policy);
    let outputs = [SUMMARY_SUFFIX, ANYTIME_SUFFIX].map(|suffix| dir.join(format!("seed-{}{suffix}", cell.seed)));
    if resume
        && outputs
            .iter()
            .all(|path| existing_digest(path).as_deref() == Some(digest.as_str()))
    {
        return Ok(CellOutcome::Skipped);
    }
    let config = RunConfig {
        policy: cell.policy,
        seed: cell.seed,
        n_iterations: grid.n_iterations,
        top_k: grid.top_k,
        check_every: grid.engine.check_every,
    };
    let engine = loaded.engine.as_ref().map(|e| e as &dyn Extrapolator);
    let trace = simulator::run(bench, &config, engine).map_err(|e| ExperimentError::Config(e.to_string()))?;
    write_trace(&trace, &dir, &digest)?;
    Ok(CellOutcome::Computed)
}

/// Runs every (benchmark, policy, parameter, seed) cell of `grid`.
///
/// Cell failures are collected in the report (and `failures.csv`) rather
/// than aborting the run. Only unreadable benchmarks or configuration
/// problems are returned as errors.
pub fn simulate(grid: &ExperimentGrid, resume: bool) -> Result<SimulateReport, ExperimentError> {
    grid.validate()?;
    let loaded = load(grid)?;
    write_manifest(grid, &loaded)?;

    let mut cells = Vec::new();
    for (b, l) in loaded.iter().enumerate() {
        for sweep in &grid.policies {
            for policy in sweep.expand(l.benchmark.i_max())? {
                for &seed in &grid.seeds {
                    cells.push(Cell {
                        bench: b,
                        policy,
                        seed,
                    });
                }
            }
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(grid.jobs.unwrap_or(0))
        .build()
        .map_err(|e| ExperimentError::Config(e.to_string()))?;
    let outcomes: Vec<Result<CellOutcome, String>> = pool.install(|| {
        cells
            .par_iter()
            .map(|cell| {
                let loaded = &loaded[cell.bench];
                match catch_unwind(AssertUnwindSafe(|| run_cell(grid, loaded, cell, resume))) {
                    Ok(Ok(outcome)) => Ok(outcome),
                    Ok(Err(e)) => Err(e.to_string()),
                    Err(_) => Err("cell panicked".to_string()),
                }
            })
            .collect()
    });

    let mut report = SimulateReport {
        total: cells.len(),
        ..SimulateReport::default()
    };
    for (cell, outcome) in cells.iter().zip(outcomes) {
        match outcome {
            Ok(CellOutcome::Computed) => report.computed += 1,
            Ok(CellOutcome::Skipped) => report.skipped += 1,
            Err(message) => {
                let label = format!("{}/{}/seed-{}", loaded[cell.bench].benchmark.name(), cell.policy, cell.seed);
                log::error!("cell {label} failed: {message}");
                report.failures.push(CellFailure { cell: label, message });
            }
        }
    }

    let failures_path = grid.out.join("failures.csv");
    if report.failures.is_empty() {
        if failures_path.exists() {
            fs::remove_file(&failures_path).map_err(|e| ExperimentError::io(&failures_path, e))?;
        }
    } else {
        let rows = report
            .failures
            .iter()
            .map(|f| vec![f.cell.clone(), f.message.clone()]);
        write_table(&failures_path, "cell failures", &["cell", "message"], rows)?;
    }
    Ok(report)
}
