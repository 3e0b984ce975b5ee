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

//! Two-objective analysis of (final error, total epochs) outcomes: Pareto
//! fronts, log-scaled hypervolume, relative-hypervolume tables and average
//! ranks, plus learning-curve ranking diagnostics.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::curves::Benchmark;
use crate::simulator::{candidate_stream, ObjectivePoint};
use crate::stats::{fractional_ranks, mean, std_error};

/// Floor applied to the error objective before taking `log10`.
pub const LOG_FLOOR: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MooError {
    #[error("no points or cells given")]
    Empty,
    #[error("non-positive coordinate {0} cannot be log-transformed")]
    NonPositive(f64),
    #[error("union front has zero hypervolume against the reference point")]
    ZeroTotalHypervolume,
    #[error("method {method:?} missing from table {table}")]
    MissingMethod { method: String, table: usize },
    #[error("sample size {requested} exceeds benchmark size {available}")]
    SampleTooLarge { requested: usize, available: usize },
}

/// A point in objective space: `y_l` is the final error, `y_i` the epochs.
/// Both are minimized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2 {
    pub y_l: f64,
    pub y_i: f64,
}

impl Point2 {
    pub fn new(y_l: f64, y_i: f64) -> Self {
        Self { y_l, y_i }
    }
}

impl From<ObjectivePoint> for Point2 {
    fn from(p: ObjectivePoint) -> Self {
        Self::new(p.y_l, p.y_i as f64)
    }
}

/// `p` dominates `q`: no worse in both objectives and not equal.
pub fn dominates(p: &Point2, q: &Point2) -> bool {
    p.y_l <= q.y_l && p.y_i <= q.y_i && p != q
}

/// Seed statistics of one (method, aggressiveness) setting.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodCell {
    pub method: String,
    pub parameter: f64,
    pub mean_yl: f64,
    pub stderr_yl: f64,
    pub mean_yi: f64,
    pub stderr_yi: f64,
    pub n_seeds: usize,
}

impl MethodCell {
    pub fn from_points(method: impl Into<String>, parameter: f64, points: &[ObjectivePoint]) -> Result<Self, MooError> {
        if points.is_empty() {
            return Err(MooError::Empty);
        }
        let yl: Vec<f64> = points.iter().map(|p| p.y_l).collect();
        let yi: Vec<f64> = points.iter().map(|p| p.y_i as f64).collect();
        Ok(Self {
            method: method.into(),
            parameter,
            mean_yl: mean(&yl),
            stderr_yl: std_error(&yl),
            mean_yi: mean(&yi),
            stderr_yi: std_error(&yi),
            n_seeds: points.len(),
        })
    }

    pub fn mean_point(&self) -> Point2 {
        Point2::new(self.mean_yl, self.mean_yi)
    }
}

/// Non-dominated points sorted by ascending `y_i` (hence descending `y_l`).
#[derive(Debug, Clone, PartialEq)]
pub struct ParetoFront {
    points: Vec<Point2>,
}

impl ParetoFront {
    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn contains(&self, p: &Point2) -> bool {
        self.points.iter().any(|q| q == p)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

pub fn pareto_front(points: &[Point2]) -> ParetoFront {
    let mut sorted = points.to_vec();
    sorted.sort_by(|p, q| p.y_i.total_cmp(&q.y_i).then(p.y_l.total_cmp(&q.y_l)));
    let mut front: Vec<Point2> = Vec::new();
    for p in sorted {
        if front.last().is_none_or(|last| p.y_l < last.y_l) {
            front.push(p);
        }
    }
    ParetoFront { points: front }
}

/// Element-wise maximum of `mean + stderr` over all cells.
pub fn reference_point(cells: &[MethodCell]) -> Result<Point2, MooError> {
    if cells.is_empty() {
        return Err(MooError::Empty);
    }
    Ok(cells.iter().fold(
        Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        |acc, c| Point2::new(acc.y_l.max(c.mean_yl + c.stderr_yl), acc.y_i.max(c.mean_yi + c.stderr_yi)),
    ))
}

fn log_point(p: &Point2) -> Result<(f64, f64), MooError> {
    let y_l = if p.y_l <= 0.0 { LOG_FLOOR } else { p.y_l };
    if !(p.y_i > 0.0) {
        return Err(MooError::NonPositive(p.y_i));
    }
    Ok((p.y_i.log10(), y_l.log10()))
}

/// Area dominated by `front` inside the reference box, after `log10` of both
/// objectives. Points on or beyond the reference contribute nothing.
pub fn hypervolume_2d(front: &ParetoFront, reference: Point2) -> Result<f64, MooError> {
    if !(reference.y_l > 0.0) {
        return Err(MooError::NonPositive(reference.y_l));
    }
    let (rx, ry) = log_point(&reference)?;
    let mut inside = Vec::with_capacity(front.len());
    for p in front.points() {
        let (x, y) = log_point(p)?;
        if x < rx && y < ry {
            inside.push(Point2::new(y, x));
        }
    }
    // re-derive the front in log space; only matters if the input was not one
    let pts = pareto_front(&inside).points;
    let mut area = 0.0;
    for (i, p) in pts.iter().enumerate() {
        let next_x = pts.get(i + 1).map_or(rx, |q| q.y_i);
        area += (next_x - p.y_i) * (ry - p.y_l);
    }
    Ok(area)
}

/// Relative hypervolume of each method's front with respect to the front of
/// all points pooled.
#[derive(Debug, Clone, PartialEq)]
pub struct RelativeHvi {
    pub scores: BTreeMap<String, f64>,
    pub union_hypervolume: f64,
    /// Always 1; kept for table output.
    pub union_score: f64,
}

pub fn relative_hvi(per_method: &BTreeMap<String, Vec<Point2>>, reference: Point2) -> Result<RelativeHvi, MooError> {
    if per_method.is_empty() {
        return Err(MooError::Empty);
    }
    let all: Vec<Point2> = per_method.values().flatten().copied().collect();
    let union_hv = hypervolume_2d(&pareto_front(&all), reference)?;
    if union_hv <= 0.0 {
        return Err(MooError::ZeroTotalHypervolume);
    }
    let mut scores = BTreeMap::new();
    for (method, points) in per_method {
        let hv = hypervolume_2d(&pareto_front(points), reference)?;
        scores.insert(method.clone(), hv / union_hv);
    }
    Ok(RelativeHvi {
        scores,
        union_hypervolume: union_hv,
        union_score: union_hv / union_hv,
    })
}

/// Mean rank per method across tables; rank 1 is the largest score and
/// ties share the mean of their positions.
pub fn average_rank(tables: &[BTreeMap<String, f64>]) -> Result<BTreeMap<String, f64>, MooError> {
    let first = tables.first().ok_or(MooError::Empty)?;
    let methods: Vec<&String> = first.keys().collect();
    let mut totals: BTreeMap<String, f64> = methods.iter().map(|m| ((*m).clone(), 0.0)).collect();
    for (t, table) in tables.iter().enumerate() {
        let mut scores = Vec::with_capacity(methods.len());
        for m in &methods {
            let v = table.get(*m).ok_or_else(|| MooError::MissingMethod {
                method: (*m).clone(),
                table: t,
            })?;
            scores.push(-v);
        }
        for (m, r) in methods.iter().zip(fractional_ranks(&scores)) {
            *totals.get_mut(*m).expect("present") += r;
        }
    }
    let n = tables.len() as f64;
    Ok(totals.into_iter().map(|(m, s)| (m, s / n)).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveRankRecord {
    pub candidate_id: String,
    /// 1 = lowest validation error at `i_max` within the sample.
    pub final_rank: usize,
    pub valid_error: Vec<f64>,
    pub worse_than_constant: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveRankReport {
    pub records: Vec<CurveRankRecord>,
    /// Over the whole benchmark.
    pub worse_than_constant_fraction: f64,
    /// Spearman correlation of epoch-1 and `i_max` validation errors over the
    /// whole benchmark.
    pub first_final_spearman: f64,
}

pub fn curve_rank_export(benchmark: &Benchmark, sample_size: usize, seed: u64) -> Result<CurveRankReport, MooError> {
    if sample_size > benchmark.len() {
        return Err(MooError::SampleTooLarge {
            requested: sample_size,
            available: benchmark.len(),
        });
    }
    let i_max = benchmark.i_max();
    let sample = candidate_stream(benchmark.len(), sample_size, seed);
    let mut by_final = sample.clone();
    by_final.sort_by(|&a, &b| {
        benchmark
            .curve(a)
            .valid_at(i_max)
            .total_cmp(&benchmark.curve(b).valid_at(i_max))
            .then(a.cmp(&b))
    });
    let records = by_final
        .iter()
        .enumerate()
        .map(|(pos, &idx)| {
            let curve = benchmark.curve(idx);
            CurveRankRecord {
                candidate_id: curve.candidate_id.clone(),
                final_rank: pos + 1,
                valid_error: curve.valid_error.clone(),
                worse_than_constant: curve.valid_at(i_max) > 1.0,
            }
        })
        .collect();
    Ok(CurveRankReport {
        records,
        worse_than_constant_fraction: benchmark.worse_than_constant_fraction(),
        first_final_spearman: benchmark.rank_stability(),
    })
}
