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

//! Learning-curve benchmarks: canonical file format, schema adapters,
//! ingestion filtering and the synthetic generator.
//!
//! The canonical file is comma-separated text with one record per
//! `(candidate, epoch)`:
//!
//! ```text
//! # name: slice_localization
//! # task_kind: regression
//! # provenance: /data/slice.csv
//! candidate_id,epoch,train_error,valid_error,test_error
//! c0,1,0.81,0.84,0.85
//! ```
//!
//! Leading `# key: value` lines carry benchmark metadata and are optional on
//! input. Errors are generalization errors (`1 - R2`).

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use statrs::distribution::{ContinuousCDF, Normal};
use thiserror::Error;

use crate::lce::Mmf4Params;
use crate::stats::spearman;

#[derive(Debug, Error)]
pub enum CurveError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },
    #[error("schema mismatch: expected columns {expected:?}, found {found:?}")]
    SchemaMismatch {
        expected: Vec<String>,
        found: Vec<String>,
    },
    #[error("unknown schema id {0:?} (known: canonical, r2)")]
    UnknownSchema(String),
    #[error("benchmark is empty after filtering ({0})")]
    Empty(FilterReport),
    #[error("invalid benchmark: {0}")]
    Invalid(String),
    #[error("invalid synthetic spec: {0}")]
    InvalidSpec(String),
}

pub type Result<T> = std::result::Result<T, CurveError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum TaskKind {
    #[default]
    Regression,
    Classification,
}

impl fmt::Display for TaskKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TaskKind::Regression => "regression",
            TaskKind::Classification => "classification",
        })
    }
}

impl FromStr for TaskKind {
    type Err = CurveError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "regression" => Ok(TaskKind::Regression),
            "classification" => Ok(TaskKind::Classification),
            other => Err(CurveError::Invalid(format!("unknown task kind {other:?}"))),
        }
    }
}

/// Per-epoch generalization errors of one hyperparameter configuration.
/// Index 0 holds epoch 1.
#[derive(Debug, Clone, PartialEq)]
pub struct LearningCurve {
    pub candidate_id: String,
    pub train_error: Vec<f64>,
    pub valid_error: Vec<f64>,
    pub test_error: Vec<f64>,
}

impl LearningCurve {
    pub fn epochs(&self) -> u32 {
        self.valid_error.len() as u32
    }

    /// Validation error after `epoch` passes (1-based).
    pub fn valid_at(&self, epoch: u32) -> f64 {
        self.valid_error[epoch as usize - 1]
    }

    pub fn test_at(&self, epoch: u32) -> f64 {
        self.test_error[epoch as usize - 1]
    }

    fn is_finite(&self) -> bool {
        self.train_error
            .iter()
            .chain(&self.valid_error)
            .chain(&self.test_error)
            .all(|v| v.is_finite())
    }
}

/// A validated, fully tabulated set of learning curves. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Benchmark {
    name: String,
    task_kind: TaskKind,
    curves: Vec<LearningCurve>,
    i_max: u32,
    provenance: String,
}

impl Benchmark {
    pub fn new(
        name: impl Into<String>,
        task_kind: TaskKind,
        curves: Vec<LearningCurve>,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        let Some(first) = curves.first() else {
            return Err(CurveError::Invalid("no curves".into()));
        };
        let i_max = first.epochs();
        if i_max < 1 {
            return Err(CurveError::Invalid("curves have no epochs".into()));
        }
        for curve in &curves {
            let n = curve.valid_error.len();
            if n != i_max as usize || curve.train_error.len() != n || curve.test_error.len() != n {
                return Err(CurveError::Invalid(format!(
                    "curve {} is not tabulated for all {i_max} epochs",
                    curve.candidate_id
                )));
            }
            if !curve.is_finite() {
                return Err(CurveError::Invalid(format!(
                    "curve {} has non-finite values",
                    curve.candidate_id
                )));
            }
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(dup) = curves.iter().find(|c| !seen.insert(c.candidate_id.as_str())) {
            return Err(CurveError::Invalid(format!(
                "duplicate candidate id {}",
                dup.candidate_id
            )));
        }
        Ok(Self {
            name: name.into(),
            task_kind,
            curves,
            i_max,
            provenance: provenance.into(),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn task_kind(&self) -> TaskKind {
        self.task_kind
    }

    pub fn curves(&self) -> &[LearningCurve] {
        &self.curves
    }

    pub fn curve(&self, index: usize) -> &LearningCurve {
        &self.curves[index]
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    pub fn i_max(&self) -> u32 {
        self.i_max
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    /// Share of curves whose final validation error exceeds the constant
    /// predictor's error of 1.
    pub fn worse_than_constant_fraction(&self) -> f64 {
        let n = self
            .curves
            .iter()
            .filter(|c| c.valid_at(self.i_max) > 1.0)
            .count();
        n as f64 / self.len() as f64
    }

    /// Spearman correlation of validation errors at epoch 1 and at `i_max`.
    pub fn rank_stability(&self) -> f64 {
        let first: Vec<f64> = self.curves.iter().map(|c| c.valid_at(1)).collect();
        let last: Vec<f64> = self.curves.iter().map(|c| c.valid_at(self.i_max)).collect();
        spearman(&first, &last)
    }
}

/// Counts from ingestion filtering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FilterReport {
    pub total: usize,
    pub kept: usize,
    pub dropped_non_finite: usize,
    pub dropped_incomplete: usize,
}

impl FilterReport {
    pub fn dropped(&self) -> usize {
        self.dropped_non_finite + self.dropped_incomplete
    }
}

impl fmt::Display for FilterReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "total={} kept={} dropped={} (non_finite={}, incomplete={})",
            self.total,
            self.kept,
            self.dropped(),
            self.dropped_non_finite,
            self.dropped_incomplete
        )
    }
}

/// How stored values map to generalization errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Schema {
    /// Values are already `1 - R2`.
    #[default]
    Canonical,
    /// Values are R2 scores (or prediction advantages); converted as `1 - v`.
    R2,
}

impl Schema {
    pub fn columns(self) -> [&'static str; 5] {
        match self {
            Schema::Canonical => ["candidate_id", "epoch", "train_error", "valid_error", "test_error"],
            Schema::R2 => ["candidate_id", "epoch", "train_r2", "valid_r2", "test_r2"],
        }
    }

    fn convert(self, stored: f64) -> f64 {
        match self {
            Schema::Canonical => stored,
            Schema::R2 => 1.0 - stored,
        }
    }
}

impl FromStr for Schema {
    type Err = CurveError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "canonical" => Ok(Schema::Canonical),
            "r2" => Ok(Schema::R2),
            other => Err(CurveError::UnknownSchema(other.to_string())),
        }
    }
}

#[derive(Default)]
struct PartialCurve {
    rows: Vec<(u32, [f64; 3])>,
}

fn parse_value(raw: &str) -> Option<f64> {
    let raw = raw.trim();
    if raw.is_empty() {
        return Some(f64::NAN);
    }
    raw.parse().ok()
}

/// Reads a benchmark file, dropping curves with non-finite or missing values.
pub fn load_benchmark(path: &Path, schema: Schema) -> Result<(Benchmark, FilterReport)> {
    let text = fs::read_to_string(path).map_err(|source| CurveError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut meta: HashMap<String, String> = HashMap::new();
    for line in text.lines().take_while(|l| l.starts_with('#')) {
        if let Some((k, v)) = line.trim_start_matches('#').split_once(':') {
            meta.insert(k.trim().to_string(), v.trim().to_string());
        }
    }

    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| parse_error(path, 1, e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    let expected = schema.columns();
    if header != expected {
        return Err(CurveError::SchemaMismatch {
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: header,
        });
    }

    let mut order: Vec<String> = Vec::new();
    let mut partial: HashMap<String, PartialCurve> = HashMap::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_error(path, line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let id = record[0].to_string();
        let epoch: u32 = record[1]
            .parse()
            .map_err(|_| parse_error(path, line, format!("bad epoch {:?}", &record[1])))?;
        if epoch == 0 {
            return Err(parse_error(path, line, "epochs start at 1".into()));
        }
        let mut values = [0.0; 3];
        for (slot, raw) in values.iter_mut().zip(record.iter().skip(2)) {
            let stored = parse_value(raw)
                .ok_or_else(|| parse_error(path, line, format!("bad value {raw:?}")))?;
            *slot = schema.convert(stored);
        }
        let entry = partial.entry(id.clone()).or_insert_with(|| {
            order.push(id.clone());
            PartialCurve::default()
        });
        if entry.rows.iter().any(|(e, _)| *e == epoch) {
            return Err(parse_error(
                path,
                line,
                format!("duplicate record for candidate {id} epoch {epoch}"),
            ));
        }
        entry.rows.push((epoch, values));
    }

    let i_max = partial
        .values()
        .flat_map(|p| p.rows.iter().map(|(e, _)| *e))
        .max()
        .unwrap_or(0);
    let mut report = FilterReport {
        total: order.len(),
        ..FilterReport::default()
    };
    let mut curves = Vec::with_capacity(order.len());
    for id in order {
        let mut rows = partial.remove(&id).unwrap_or_default().rows;
        rows.sort_by_key(|(e, _)| *e);
        let complete = rows.len() == i_max as usize;
        if !complete {
            report.dropped_incomplete += 1;
            continue;
        }
        let curve = LearningCurve {
            candidate_id: id,
            train_error: rows.iter().map(|(_, v)| v[0]).collect(),
            valid_error: rows.iter().map(|(_, v)| v[1]).collect(),
            test_error: rows.iter().map(|(_, v)| v[2]).collect(),
        };
        if !curve.is_finite() {
            report.dropped_non_finite += 1;
            continue;
        }
        curves.push(curve);
    }
    report.kept = curves.len();
    if curves.is_empty() {
        return Err(CurveError::Empty(report));
    }
    if report.dropped() > 0 {
        log::info!("{}: {report}", path.display());
    }

    let name = meta.remove("name").unwrap_or_else(|| {
        path.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "benchmark".into())
    });
    let task_kind = match meta.get("task_kind") {
        Some(kind) => kind.parse()?,
        None => TaskKind::default(),
    };
    let provenance = meta
        .remove("provenance")
        .unwrap_or_else(|| path.display().to_string());
    Ok((Benchmark::new(name, task_kind, curves, provenance)?, report))
}

fn parse_error(path: &Path, line: u64, message: String) -> CurveError {
    CurveError::Parse {
        path: path.to_path_buf(),
        line,
        message,
    }
}

/// Writes `benchmark` in the canonical format.
pub fn canonical_export(benchmark: &Benchmark, path: &Path) -> Result<()> {
    if benchmark.is_empty() {
        return Err(CurveError::Empty(FilterReport::default()));
    }
    let io_err = |source| CurveError::Io {
        path: path.to_path_buf(),
        source,
    };
    let mut out = Vec::new();
    writeln!(out, "# name: {}", benchmark.name).map_err(io_err)?;
    writeln!(out, "# task_kind: {}", benchmark.task_kind).map_err(io_err)?;
    writeln!(out, "# provenance: {}", benchmark.provenance).map_err(io_err)?;
    {
        let mut writer = csv::Writer::from_writer(&mut out);
        let csv_err = |e: csv::Error| CurveError::Invalid(e.to_string());
        writer.write_record(Schema::Canonical.columns()).map_err(csv_err)?;
        for curve in &benchmark.curves {
            for e in 0..curve.valid_error.len() {
                writer
                    .write_record([
                        curve.candidate_id.clone(),
                        (e + 1).to_string(),
                        curve.train_error[e].to_string(),
                        curve.valid_error[e].to_string(),
                        curve.test_error[e].to_string(),
                    ])
                    .map_err(csv_err)?;
            }
        }
        writer.flush().map_err(io_err)?;
    }
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(io_err)?;
    }
    fs::write(path, out).map_err(io_err)
}

/// Parameters of the synthetic curve generator.
///
/// Each curve is an MMF4 mean pinned to a drawn epoch-1 error and final error,
/// plus independent Gaussian noise per split and epoch. Noise grows with the
/// final error, so poor configurations oscillate more.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SyntheticSpec {
    pub name: String,
    pub task_kind: TaskKind,
    pub n_curves: usize,
    pub i_max: u32,
    /// Range of the mean error after one epoch.
    pub initial_error: [f64; 2],
    /// Range of the mean error at `i_max` for converging curves.
    pub final_error: [f64; 2],
    /// Range of the mean error at `i_max` for diverging curves (above 1).
    pub diverging_final_error: [f64; 2],
    /// Final errors are `lo + (hi - lo) * u^skew`; larger skew crowds
    /// candidates near the best value.
    pub final_skew: f64,
    /// MMF4 `b`, sampled log-uniformly.
    pub b: [f64; 2],
    /// MMF4 `d`, sampled uniformly.
    pub d: [f64; 2],
    /// Per-curve noise standard deviation, interpolated by where the curve's
    /// final error falls between the best and worst of the benchmark.
    pub noise: [f64; 2],
    /// Train error sits this fraction below the mean generalization error.
    pub train_gap: f64,
    pub fraction_diverging: f64,
    /// Correlation between the latent epoch-1 and final quality scores.
    pub rank_stability: f64,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            name: "synthetic".into(),
            task_kind: TaskKind::Regression,
            n_curves: 300,
            i_max: 100,
            initial_error: [0.5, 1.0],
            final_error: [0.02, 0.6],
            diverging_final_error: [1.05, 1.5],
            final_skew: 2.0,
            b: [0.5, 20.0],
            d: [0.5, 2.0],
            noise: [0.001, 0.03],
            train_gap: 0.1,
            fraction_diverging: 0.0,
            rank_stability: 0.9,
            seed: 0,
        }
    }
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(CurveError::InvalidSpec(msg.to_string()));
        if self.n_curves < 1 {
            return bad("n_curves must be >= 1");
        }
        if self.i_max < 2 {
            return bad("i_max must be >= 2");
        }
        for (name, [lo, hi]) in [
            ("initial_error", self.initial_error),
            ("final_error", self.final_error),
            ("diverging_final_error", self.diverging_final_error),
            ("b", self.b),
            ("d", self.d),
            ("noise", self.noise),
        ] {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(CurveError::InvalidSpec(format!("{name} range [{lo}, {hi}] is empty")));
            }
        }
        if self.b[0] <= 0.0 || self.d[0] <= 0.0 {
            return bad("b and d ranges must be positive");
        }
        if self.noise[0] < 0.0 {
            return bad("noise must be non-negative");
        }
        if !(self.final_skew > 0.0 && self.final_skew.is_finite()) {
            return bad("final_skew must be positive");
        }
        if !(0.0..=1.0).contains(&self.fraction_diverging) {
            return bad("fraction_diverging must lie in [0, 1]");
        }
        if !(0.0..=1.0).contains(&self.rank_stability) {
            return bad("rank_stability must lie in [0, 1]");
        }
        if !(0.0..1.0).contains(&self.train_gap) {
            return bad("train_gap must lie in [0, 1)");
        }
        Ok(())
    }

    /// Hex SHA-256 of the spec's TOML form.
    pub fn digest(&self) -> String {
        let text = toml::to_string(self).expect("spec serializes");
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}

fn lerp([lo, hi]: [f64; 2], t: f64) -> f64 {
    lo + (hi - lo) * t
}

/// Deterministic synthetic benchmark; identical specs give identical output.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<Benchmark> {
    spec.validate()?;
    let n = spec.n_curves;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let normal = Normal::standard();

    let finals: Vec<f64> = (0..n)
        .map(|_| {
            let diverging = rng.random::<f64>() < spec.fraction_diverging;
            let u: f64 = rng.random();
            if diverging {
                lerp(spec.diverging_final_error, u)
            } else {
                lerp(spec.final_error, u.powf(spec.final_skew))
            }
        })
        .collect();

    // rank 0 = best final error
    let mut by_final: Vec<usize> = (0..n).collect();
    by_final.sort_by(|&i, &j| finals[i].total_cmp(&finals[j]).then(i.cmp(&j)));
    let mut rank = vec![0usize; n];
    for (r, &i) in by_final.iter().enumerate() {
        rank[i] = r;
    }

    let lowest = finals[by_final[0]];
    let spread = finals[by_final[n - 1]] - lowest;
    let stability = spec.rank_stability;
    let independent = (1.0 - stability * stability).sqrt();
    let horizon = spec.i_max as f64;
    let mut curves = Vec::with_capacity(n);
    for j in 0..n {
        let z_final = normal.inverse_cdf((rank[j] as f64 + 0.5) / n as f64);
        let eps: f64 = rng.sample(StandardNormal);
        let initial = lerp(spec.initial_error, normal.cdf(stability * z_final + independent * eps));
        let b = 10f64.powf(lerp([spec.b[0].log10(), spec.b[1].log10()], rng.random()));
        let d = lerp(spec.d, rng.random());
        let params = pin_endpoints(initial, finals[j], horizon, b, d);
        let badness = if spread > 0.0 { (finals[j] - lowest) / spread } else { 0.0 };
        let sd = lerp(spec.noise, badness);

        let mut curve = LearningCurve {
            candidate_id: format!("{}-{j:04}", spec.name),
            train_error: Vec::with_capacity(spec.i_max as usize),
            valid_error: Vec::with_capacity(spec.i_max as usize),
            test_error: Vec::with_capacity(spec.i_max as usize),
        };
        for epoch in 1..=spec.i_max {
            let mean = params.eval(epoch as f64);
            let mut noise = || -> f64 { sd * rng.sample::<f64, _>(StandardNormal) };
            let train = mean * (1.0 - spec.train_gap) + 0.5 * noise();
            let valid = mean + noise();
            let test = mean + noise();
            curve.train_error.push(train.max(0.0));
            curve.valid_error.push(valid.max(0.0));
            curve.test_error.push(test.max(0.0));
        }
        curves.push(curve);
    }
    Benchmark::new(
        spec.name.clone(),
        spec.task_kind,
        curves,
        format!("synthetic:sha256={}", spec.digest()),
    )
}

/// MMF4 parameters with `f(1) = initial` and `f(horizon) = last` for the
/// given shape `(b, d)`.
fn pin_endpoints(initial: f64, last: f64, horizon: f64, b: f64, d: f64) -> Mmf4Params {
    let w1 = b / (b + 1.0);
    let wt = b / (b + horizon.powf(d));
    let spread = (initial - last) / (w1 - wt);
    let c = last - spread * wt;
    Mmf4Params { a: c + spread, b, c, d }
}
