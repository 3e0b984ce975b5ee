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

//! Damped least-squares (Levenberg-Marquardt) fitting of MMF4 to a curve
//! prefix, with random restarts.
//!
//! The solver works in `(a, ln b, c, d)` so that `b` stays positive without
//! constraints. A step is only taken when it lowers the sum of squared
//! residuals, so every restart ends at or below its starting SSE.

use nalgebra::{Matrix4, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{LceError, Mmf4Params};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FitConfig {
    /// Random restarts in addition to the heuristic start.
    pub restarts: usize,
    pub max_iterations: usize,
    pub gradient_tol: f64,
    pub step_tol: f64,
    pub seed: u64,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            restarts: 8,
            max_iterations: 200,
            gradient_tol: 1e-12,
            step_tol: 1e-10,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub params: Mmf4Params,
    pub sse: f64,
    /// SSE at the start point that produced `params`.
    pub initial_sse: f64,
    pub converged: bool,
    pub restarts_used: usize,
}

/// Observed anchors with precomputed `ln(epoch)`.
struct Anchors {
    ln_x: Vec<f64>,
    y: Vec<f64>,
}

impl Anchors {
    fn new(prefix: &[(f64, f64)]) -> Self {
        Self {
            ln_x: prefix.iter().map(|(x, _)| x.ln()).collect(),
            y: prefix.iter().map(|(_, y)| *y).collect(),
        }
    }

    fn sse(&self, p: &Mmf4Params) -> f64 {
        self.ln_x
            .iter()
            .zip(&self.y)
            .map(|(lx, y)| (p.eval_ln(*lx) - y).powi(2))
            .sum()
    }
}

// Internal coordinates: [a, ln b, c, d].
fn to_internal(p: &Mmf4Params) -> Vector4<f64> {
    Vector4::new(p.a, p.b.ln(), p.c, p.d)
}

fn from_internal(v: &Vector4<f64>) -> Mmf4Params {
    Mmf4Params {
        a: v[0],
        b: v[1].exp(),
        c: v[2],
        d: v[3],
    }
}

/// Heuristic start: first and last observed values as the two asymptotes.
pub fn heuristic_init(prefix: &[(f64, f64)]) -> Mmf4Params {
    let first = prefix.first().map_or(0.5, |p| p.1);
    let last = prefix.last().map_or(0.5, |p| p.1);
    Mmf4Params {
        a: first,
        b: 1.0,
        c: last,
        d: 1.0,
    }
}

pub fn fit_lm(prefix: &[(f64, f64)], config: &FitConfig) -> Result<FitResult, LceError> {
    if prefix.len() < 4 {
        return Err(LceError::InsufficientData(prefix.len()));
    }
    if prefix.iter().any(|(x, y)| !(x.is_finite() && *x > 0.0 && y.is_finite())) {
        return Err(LceError::NonFiniteData);
    }
    let anchors = Anchors::new(prefix);
    let init = heuristic_init(prefix);
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let mut best = solve(&anchors, init, config);
    for _ in 0..config.restarts {
        let start = Mmf4Params {
            a: init.a * (1.0 + rng.random_range(-0.2..0.2)),
            b: 10f64.powf(rng.random_range(-1.0..2.0)),
            c: init.c * (1.0 + rng.random_range(-0.2..0.2)),
            d: 2f64.powf(rng.random_range(-2.0..2.0)),
        };
        let candidate = solve(&anchors, start, config);
        if candidate.sse < best.sse || (!best.sse.is_finite() && candidate.sse.is_finite()) {
            best = candidate;
        }
    }
    best.restarts_used = config.restarts;
    Ok(best)
}

fn solve(anchors: &Anchors, start: Mmf4Params, config: &FitConfig) -> FitResult {
    let mut theta = to_internal(&start);
    let mut params = start;
    let mut sse = anchors.sse(&params);
    let initial_sse = sse;
    let mut converged = false;
    if !sse.is_finite() {
        return FitResult {
            params,
            sse,
            initial_sse,
            converged,
            restarts_used: 0,
        };
    }

    let mut lambda = 1e-3;
    'outer: for _ in 0..config.max_iterations {
        let (jtj, jtr) = normal_equations(anchors, &params);
        if jtr.amax() <= config.gradient_tol {
            converged = true;
            break;
        }
        loop {
            let mut damped = jtj;
            for j in 0..4 {
                damped[(j, j)] += lambda * jtj[(j, j)].max(1e-9);
            }
            let step = match damped.cholesky() {
                Some(chol) => chol.solve(&-jtr),
                None => match damped.lu().solve(&-jtr) {
                    Some(s) => s,
                    None => {
                        lambda *= 10.0;
                        if lambda > 1e16 {
                            break 'outer;
                        }
                        continue;
                    }
                },
            };
            let trial = theta + step;
            let trial_params = from_internal(&trial);
            let trial_sse = anchors.sse(&trial_params);
            if trial_sse.is_finite() && trial_sse < sse {
                let small_step = step.norm() <= config.step_tol * (theta.norm() + config.step_tol);
                theta = trial;
                params = trial_params;
                sse = trial_sse;
                lambda = (lambda / 3.0).max(1e-12);
                if small_step || sse == 0.0 {
                    converged = true;
                    break 'outer;
                }
                break;
            }
            lambda *= 4.0;
            if lambda > 1e16 {
                // no damped step improves: numerically stationary
                converged = true;
                break 'outer;
            }
        }
    }

    FitResult {
        params,
        sse,
        initial_sse,
        converged,
        restarts_used: 0,
    }
}

/// `J^T J` and `J^T r` in internal coordinates.
fn normal_equations(anchors: &Anchors, p: &Mmf4Params) -> (Matrix4<f64>, Vector4<f64>) {
    let mut jtj = Matrix4::zeros();
    let mut jtr = Vector4::zeros();
    let spread = p.a - p.c;
    for (lx, y) in anchors.ln_x.iter().zip(&anchors.y) {
        let w = p.weight_ln(*lx);
        let r = p.c + spread * w - y;
        let shape = spread * w * (1.0 - w);
        let row = Vector4::new(w, shape, 1.0 - w, -shape * lx);
        jtj += row * row.transpose();
        jtr += row * r;
    }
    (jtj, jtr)
}
