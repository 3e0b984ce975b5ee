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


//! Independent oracles and fixtures shared by the integration tests. Nothing
//! here calls into the code it is used to check.

#![allow(dead_code)]

use std::collections::BTreeMap;

use lcdiscard::curves::{generate_synthetic, Benchmark, LearningCurve, SyntheticSpec, TaskKind};
use lcdiscard::moo::Point2;

/// Plain double loop for `1 - SS_res / SS_tot`.
pub fn r2_loop(y: &[f64], yhat: &[f64]) -> f64 {
    let mut total = 0.0;
    for v in y {
        total += v;
    }
    let mean = total / y.len() as f64;
    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    for i in 0..y.len() {
        ss_res += (y[i] - yhat[i]) * (y[i] - yhat[i]);
        ss_tot += (y[i] - mean) * (y[i] - mean);
    }
    1.0 - ss_res / ss_tot
}

/// `1 - L(model) / L(mode)` under 0-1 loss. Ties for the mode go to the
/// smallest label.
pub fn r2_class_loop<L: Ord + Clone>(y: &[L], yhat: &[L]) -> f64 {
    let mut counts: BTreeMap<L, usize> = BTreeMap::new();
    for v in y {
        *counts.entry(v.clone()).or_insert(0) += 1;
    }
    let mut mode = None;
    let mut best = 0;
    for (label, count) in &counts {
        if *count > best {
            best = *count;
            mode = Some(label.clone());
        }
    }
    let mode = mode.expect("non-empty");
    let mut errors = 0usize;
    let mut mode_errors = 0usize;
    for i in 0..y.len() {
        if y[i] != yhat[i] {
            errors += 1;
        }
        if y[i] != mode {
            mode_errors += 1;
        }
    }
    1.0 - errors as f64 / mode_errors as f64
}

/// Survival by full sort: the current score is placed ahead of equal past
/// scores and must land within the first `max(1, floor(m / r))` places.
pub fn sha_oracle(past: &[f64], current: f64, r: f64) -> bool {
    let mut all: Vec<(f64, bool)> = past.iter().map(|v| (*v, false)).collect();
    all.push((current, true));
    all.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)));
    let position = all.iter().position(|e| e.1).unwrap() + 1;
    let quota = ((all.len() as f64 / r).floor() as usize).max(1);
    position <= quota
}

/// Non-dominated subset by pairwise comparison, duplicates collapsed.
pub fn pareto_oracle(points: &[Point2]) -> Vec<Point2> {
    let mut out: Vec<Point2> = Vec::new();
    for p in points {
        let dominated = points.iter().any(|q| {
            q.y_l <= p.y_l && q.y_i <= p.y_i && (q.y_l < p.y_l || q.y_i < p.y_i)
        });
        if !dominated && !out.iter().any(|o| o.y_l == p.y_l && o.y_i == p.y_i) {
            out.push(*p);
        }
    }
    out.sort_by(|a, b| a.y_i.total_cmp(&b.y_i));
    out
}

fn log_coords(p: &Point2) -> (f64, f64) {
    (p.y_i.log10(), p.y_l.max(1e-12).log10())
}

/// Counts cells of an `n x n` raster over the log-space box that are
/// dominated by at least one point. Each column takes the lowest error among
/// points to its left, then counts the rows above it.
pub fn raster_hypervolume(points: &[Point2], reference: Point2, n: usize) -> f64 {
    let (rx, ry) = log_coords(&reference);
    let logs: Vec<(f64, f64)> = points
        .iter()
        .map(log_coords)
        .filter(|(x, y)| *x < rx && *y < ry)
        .collect();
    if logs.is_empty() {
        return 0.0;
    }
    let x0 = logs.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let y0 = logs.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let dx = (rx - x0) / n as f64;
    let dy = (ry - y0) / n as f64;
    let mut count = 0u64;
    for i in 0..n {
        let cx = x0 + (i as f64 + 0.5) * dx;
        let floor = logs
            .iter()
            .filter(|p| p.0 <= cx)
            .map(|p| p.1)
            .fold(f64::INFINITY, f64::min);
        if floor.is_infinite() {
            continue;
        }
        for j in 0..n {
            let cy = y0 + (j as f64 + 0.5) * dy;
            if cy >= floor {
                count += 1;
            }
        }
    }
    count as f64 * dx * dy
}

/// Exact area from horizontal slabs in log space: between consecutive
/// distinct error levels, the covered width runs from the leftmost point at
/// or below that level to the reference.
pub fn slab_hypervolume(points: &[Point2], reference: Point2) -> f64 {
    let (rx, ry) = log_coords(&reference);
    let logs: Vec<(f64, f64)> = points
        .iter()
        .map(log_coords)
        .filter(|(x, y)| *x < rx && *y < ry)
        .collect();
    let mut levels: Vec<f64> = logs.iter().map(|p| p.1).collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    let mut area = 0.0;
    for (k, level) in levels.iter().enumerate() {
        let top = levels.get(k + 1).copied().unwrap_or(ry);
        let left = logs
            .iter()
            .filter(|p| p.1 <= *level)
            .map(|p| p.0)
            .fold(f64::INFINITY, f64::min);
        area += (rx - left) * (top - level);
    }
    area
}

/// Synthetic benchmark with the default shape and the given size, rank
/// stability and seed.
pub fn synthetic(n_curves: usize, rank_stability: f64, seed: u64) -> Benchmark {
    let spec = SyntheticSpec {
        n_curves,
        rank_stability,
        seed,
        ..SyntheticSpec::default()
    };
    generate_synthetic(&spec).expect("valid spec")
}

pub fn curve(id: &str, valid: &[f64], test: &[f64]) -> LearningCurve {
    LearningCurve {
        candidate_id: id.to_string(),
        train_error: valid.to_vec(),
        valid_error: valid.to_vec(),
        test_error: test.to_vec(),
    }
}

pub fn benchmark(name: &str, curves: Vec<LearningCurve>) -> Benchmark {
    Benchmark::new(name, TaskKind::Regression, curves, "test fixture").expect("valid fixture")
}

/// Writes a canonical curve file by hand, without the library's exporter.
pub fn write_canonical(path: &std::path::Path, name: &str, bench: &Benchmark) {
    use std::fmt::Write;
    let mut text = format!("# name: {name}\n");
    text.push_str("candidate_id,epoch,train_error,valid_error,test_error\n");
    for c in bench.curves() {
        for e in 0..c.valid_error.len() {
            writeln!(
                text,
                "{},{},{},{},{}",
                c.candidate_id,
                e + 1,
                c.train_error[e],
                c.valid_error[e],
                c.test_error[e]
            )
            .unwrap();
        }
    }
    std::fs::write(path, text).unwrap();
}
