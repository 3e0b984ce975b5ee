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

//! Aggregation of simulation results into analysis tables.
//!
//! Written to the output directory:
//!
//! - `cells.csv`: mean and standard error of both objectives per setting
//! - `anytime.csv`: per-iteration mean and standard error across seeds
//! - `pareto.csv`: per-setting mean points with front membership flags
//! - `relative_hvi.csv`: one row per benchmark, one column per method
//! - `average_rank.csv`: mean rank of each method across benchmarks
//! - `curve_rank_<benchmark>.csv` and `curve_rank_summary.csv`

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::runner::{read_manifest, ANYTIME_SUFFIX, SUMMARY_HEADER, SUMMARY_SUFFIX};
use super::table::{read_table, write_table, Table};
use super::ExperimentError;
use crate::curves::load_benchmark;
use crate::moo::{self, MethodCell, MooError, Point2};
use crate::policy::PolicyKind;
use crate::simulator::ObjectivePoint;
use crate::stats::{mean, std_error};

/// Curves sampled per benchmark for the curve-rank export.
const CURVE_SAMPLE: usize = 100;

#[derive(Debug, Clone, PartialEq)]
pub struct AnalyzeSummary {
    pub summaries: usize,
    pub cells: usize,
    pub benchmarks: usize,
    pub files: Vec<PathBuf>,
}

/// Identifies a (benchmark, method, parameter) setting. The parameter label
/// is kept as text so grouping is exact.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct SettingKey {
    benchmark: String,
    kind: PolicyKind,
    parameter: String,
}

struct SeedResult {
    seed: u64,
    point: ObjectivePoint,
    anytime: Table,
}

fn find_summaries(dir: &Path, found: &mut Vec<PathBuf>) -> Result<(), ExperimentError> {
    let entries = fs::read_dir(dir).map_err(|e| ExperimentError::io(dir, e))?;
    for entry in entries {
        let path = entry.map_err(|e| ExperimentError::io(dir, e))?.path();
        if path.is_dir() {
            find_summaries(&path, found)?;
        } else if path.to_string_lossy().ends_with(SUMMARY_SUFFIX) {
            found.push(path);
        }
    }
    Ok(())
}

fn parse<T: std::str::FromStr>(path: &Path, raw: &str, what: &str) -> Result<T, ExperimentError> {
    raw.parse().map_err(|_| ExperimentError::Table {
        path: path.to_path_buf(),
        message: format!("bad {what} {raw:?}"),
    })
}

fn fmt(v: f64) -> String {
    v.to_string()
}

fn numeric_column(table: &Table, path: &Path, name: &str) -> Result<Vec<f64>, ExperimentError> {
    let col = table.column(name).ok_or_else(|| ExperimentError::Table {
        path: path.to_path_buf(),
        message: format!("missing column {name}"),
    })?;
    table.rows.iter().map(|r| parse(path, &r[col], name)).collect()
}

/// Reads every summary under `results` and writes the analysis tables to
/// `out`. Outputs depend only on file contents, so reruns are byte-identical.
pub fn analyze(results: &Path, out: &Path) -> Result<AnalyzeSummary, ExperimentError> {
    if !results.is_dir() {
        return Err(ExperimentError::MissingInput(format!(
            "{} is not a directory",
            results.display()
        )));
    }
    let mut summaries = Vec::new();
    find_summaries(results, &mut summaries)?;
    summaries.sort();
    if summaries.is_empty() {
        return Err(ExperimentError::MissingInput(format!(
            "no *{SUMMARY_SUFFIX} files under {}",
            results.display()
        )));
    }

    let mut digest = Sha256::new();
    let mut groups: BTreeMap<SettingKey, Vec<SeedResult>> = BTreeMap::new();
    let mut seeds = BTreeSet::new();
    for path in &summaries {
        digest.update(fs::read(path).map_err(|e| ExperimentError::io(path, e))?);
        let table = read_table(path)?;
        if table.header != SUMMARY_HEADER || table.rows.len() != 1 {
            return Err(ExperimentError::Table {
                path: path.clone(),
                message: "expected one summary record".into(),
            });
        }
        let row = &table.rows[0];
        let seed: u64 = parse(path, &row[3], "seed")?;
        let point = ObjectivePoint {
            y_l: parse(path, &row[4], "y_l")?,
            y_i: parse(path, &row[5], "y_i")?,
        };
        let kind: PolicyKind = row[1].parse().map_err(|_| ExperimentError::Table {
            path: path.clone(),
            message: format!("unknown policy {:?}", row[1]),
        })?;
        let anytime_path = PathBuf::from(path.to_string_lossy().replace(SUMMARY_SUFFIX, ANYTIME_SUFFIX));
        let anytime = read_table(&anytime_path)?;
        seeds.insert(seed);
        groups
            .entry(SettingKey {
                benchmark: row[0].clone(),
                kind,
                parameter: row[2].clone(),
            })
            .or_default()
            .push(SeedResult { seed, point, anytime });
    }
    for results in groups.values_mut() {
        results.sort_by_key(|r| r.seed);
    }
    let seed_list: Vec<String> = seeds.iter().map(u64::to_string).collect();
    let prov = format!(
        "config_digest: {}, seed: {}",
        hex::encode(digest.finalize()),
        seed_list.join(";")
    );

    let mut files = Vec::new();
    let mut write = |name: &str, header: &[&str], rows: Vec<Vec<String>>| -> Result<(), ExperimentError> {
        let path = out.join(name);
        write_table(&path, &prov, header, rows)?;
        files.push(path);
        Ok(())
    };

    // per-setting seed statistics
    let mut cells: BTreeMap<&SettingKey, MethodCell> = BTreeMap::new();
    for (key, results) in &groups {
        let points: Vec<ObjectivePoint> = results.iter().map(|r| r.point).collect();
        let parameter: f64 = key.parameter.parse().unwrap_or(f64::NAN);
        cells.insert(key, MethodCell::from_points(key.kind.label(), parameter, &points)?);
    }
    write(
        "cells.csv",
        &["benchmark", "method", "parameter", "n_seeds", "mean_yl", "stderr_yl", "mean_yi", "stderr_yi"],
        cells
            .iter()
            .map(|(k, c)| {
                vec![
                    k.benchmark.clone(),
                    k.kind.id().to_string(),
                    k.parameter.clone(),
                    c.n_seeds.to_string(),
                    fmt(c.mean_yl),
                    fmt(c.stderr_yl),
                    fmt(c.mean_yi),
                    fmt(c.stderr_yi),
                ]
            })
            .collect(),
    )?;

    write(
        "anytime.csv",
        &[
            "benchmark",
            "method",
            "parameter",
            "iteration",
            "n_seeds",
            "mean_epochs",
            "stderr_epochs",
            "mean_test_error",
            "stderr_test_error",
            "mean_valid_error",
            "stderr_valid_error",
        ],
        anytime_rows(&groups, results)?,
    )?;

    // fronts, hypervolumes and ranks per benchmark
    let mut by_bench: BTreeMap<&str, Vec<(&SettingKey, &MethodCell)>> = BTreeMap::new();
    for (k, c) in &cells {
        by_bench.entry(k.benchmark.as_str()).or_default().push((k, c));
    }
    let methods: BTreeSet<PolicyKind> = groups.keys().map(|k| k.kind).collect();
    let mut pareto_rows = Vec::new();
    let mut hvi_rows = Vec::new();
    let mut hvi_tables = Vec::new();
    for (bench, entries) in &by_bench {
        let bench_cells: Vec<MethodCell> = entries.iter().map(|(_, c)| (*c).clone()).collect();
        let reference = moo::reference_point(&bench_cells)?;
        let mut per_method: BTreeMap<String, Vec<Point2>> = BTreeMap::new();
        for (k, c) in entries {
            per_method
                .entry(k.kind.label().to_string())
                .or_default()
                .push(c.mean_point());
        }
        let union = moo::pareto_front(&per_method.values().flatten().copied().collect::<Vec<_>>());
        let fronts: BTreeMap<&String, moo::ParetoFront> =
            per_method.iter().map(|(m, p)| (m, moo::pareto_front(p))).collect();
        for (k, c) in entries {
            let p = c.mean_point();
            let own = &fronts[&k.kind.label().to_string()];
            pareto_rows.push(vec![
                bench.to_string(),
                k.kind.id().to_string(),
                k.parameter.clone(),
                fmt(p.y_l),
                fmt(p.y_i),
                own.contains(&p).to_string(),
                union.contains(&p).to_string(),
            ]);
        }

        let mut row = vec![bench.to_string()];
        match moo::relative_hvi(&per_method, reference) {
            Ok(rel) => {
                for m in &methods {
                    row.push(rel.scores.get(m.label()).map_or_else(|| "nan".to_string(), |v| fmt(*v)));
                }
                row.push(fmt(rel.union_score));
                if methods.iter().all(|m| rel.scores.contains_key(m.label())) {
                    hvi_tables.push(rel.scores);
                }
            }
            Err(MooError::ZeroTotalHypervolume) => {
                log::warn!("{bench}: all points lie on the reference box; relative HVI undefined");
                row.extend(methods.iter().map(|_| "nan".to_string()));
                row.push("nan".to_string());
            }
            Err(e) => return Err(e.into()),
        }
        hvi_rows.push(row);
    }
    write(
        "pareto.csv",
        &["benchmark", "method", "parameter", "yl", "yi", "on_front", "on_union_front"],
        pareto_rows,
    )?;
    let mut hvi_header = vec!["benchmark"];
    hvi_header.extend(methods.iter().map(|m| m.label()));
    hvi_header.push("union");
    write("relative_hvi.csv", &hvi_header, hvi_rows)?;

    let rank_rows = if hvi_tables.is_empty() {
        Vec::new()
    } else {
        let ranks = moo::average_rank(&hvi_tables)?;
        methods
            .iter()
            .filter_map(|m| ranks.get(m.label()).map(|r| (m, r)))
            .map(|(m, r)| vec![m.label().to_string(), fmt(*r), hvi_tables.len().to_string()])
            .collect()
    };
    write("average_rank.csv", &["method", "average_rank", "n_benchmarks"], rank_rows)?;

    // learning-curve ranking diagnostics need the benchmark files
    let mut curve_summary = Vec::new();
    if let Some(manifest) = read_manifest(results) {
        for entry in manifest.benchmarks {
            let schema = match entry.schema.parse() {
                Ok(s) => s,
                Err(e) => {
                    log::warn!("skipping curve ranks for {}: {e}", entry.name);
                    continue;
                }
            };
            let benchmark = match load_benchmark(&entry.path, schema) {
                Ok((b, _)) => b,
                Err(e) => {
                    log::warn!("skipping curve ranks for {}: {e}", entry.name);
                    continue;
                }
            };
            let report = moo::curve_rank_export(&benchmark, CURVE_SAMPLE.min(benchmark.len()), 0)?;
            let mut rows = Vec::new();
            for rec in &report.records {
                for (e, v) in rec.valid_error.iter().enumerate() {
                    rows.push(vec![
                        rec.candidate_id.clone(),
                        rec.final_rank.to_string(),
                        rec.worse_than_constant.to_string(),
                        (e + 1).to_string(),
                        fmt(*v),
                    ]);
                }
            }
            write(
                &format!("curve_rank_{}.csv", entry.name),
                &["candidate_id", "final_rank", "worse_than_constant", "epoch", "valid_error"],
                rows,
            )?;
            curve_summary.push(vec![
                entry.name.clone(),
                benchmark.len().to_string(),
                fmt(report.worse_than_constant_fraction),
                fmt(report.first_final_spearman),
            ]);
        }
    }
    write(
        "curve_rank_summary.csv",
        &["benchmark", "n_curves", "worse_than_constant_fraction", "first_final_spearman"],
        curve_summary,
    )?;

    Ok(AnalyzeSummary {
        summaries: summaries.len(),
        cells: cells.len(),
        benchmarks: by_bench.len(),
        files,
    })
}

fn anytime_rows(
    groups: &BTreeMap<SettingKey, Vec<SeedResult>>,
    results_dir: &Path,
) -> Result<Vec<Vec<String>>, ExperimentError> {
    let mut rows = Vec::new();
    for (key, results) in groups {
        let mut columns = Vec::with_capacity(results.len());
        for r in results {
            let path = results_dir.join(&key.benchmark);
            let epochs = numeric_column(&r.anytime, &path, "cumulative_epochs")?;
            let test = numeric_column(&r.anytime, &path, "final_test_error")?;
            let valid = numeric_column(&r.anytime, &path, "final_valid_error")?;
            columns.push((epochs, test, valid));
        }
        let longest = columns.iter().map(|c| c.0.len()).max().unwrap_or(0);
        for i in 0..longest {
            let at = |pick: fn(&(Vec<f64>, Vec<f64>, Vec<f64>)) -> &Vec<f64>| -> Vec<f64> {
                columns.iter().filter_map(|c| pick(c).get(i).copied()).collect()
            };
            let epochs = at(|c| &c.0);
            let test = at(|c| &c.1);
            let valid = at(|c| &c.2);
            rows.push(vec![
                key.benchmark.clone(),
                key.kind.id().to_string(),
                key.parameter.clone(),
                (i + 1).to_string(),
                epochs.len().to_string(),
                fmt(mean(&epochs)),
                fmt(std_error(&epochs)),
                fmt(mean(&test)),
                fmt(std_error(&test)),
                fmt(mean(&valid)),
                fmt(std_error(&valid)),
            ]);
        }
    }
    Ok(rows)
}
