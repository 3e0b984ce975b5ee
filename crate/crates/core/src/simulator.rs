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

//! Replay of random-search HPO with per-epoch early discarding.
//!
//! A seeded permutation of the benchmark forms the candidate stream. Every
//! candidate trains epoch by epoch (one epoch charged per step) until the
//! policy stops it or it reaches `i_max`. After `k` candidates the run would
//! return the best of the top-`top_k` observed candidates, each trained to
//! `i_max`; candidates not already complete are retrained from scratch and
//! charged a full `i_max`. The anytime series records that outcome for every
//! `k`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curves::Benchmark;
use crate::lce::Extrapolator;
use crate::policy::{Policy, PolicyError, PolicySpec, SharedHistory};

pub const DEFAULT_ITERATIONS: usize = 200;
pub const DEFAULT_TOP_K: usize = 3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error(transparent)]
    Policy(#[from] PolicyError),
    #[error("invalid run configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub policy: PolicySpec,
    pub seed: u64,
    pub n_iterations: usize,
    pub top_k: usize,
    /// LCE check cadence in epochs.
    pub check_every: u32,
}

impl RunConfig {
    pub fn new(policy: PolicySpec, seed: u64) -> Self {
        Self {
            policy,
            seed,
            n_iterations: DEFAULT_ITERATIONS,
            top_k: DEFAULT_TOP_K,
            check_every: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CandidateRecord {
    /// Index into the benchmark's curves.
    pub candidate: usize,
    pub candidate_id: String,
    pub stop_epoch: u32,
    pub observed_valid_error: f64,
    pub epochs_charged: u32,
}

impl CandidateRecord {
    pub fn completed(&self, i_max: u32) -> bool {
        self.stop_epoch == i_max
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnytimeEntry {
    /// Number of candidates evaluated so far (1-based).
    pub iteration: usize,
    pub cumulative_epochs: u64,
    pub final_valid_error: f64,
    pub final_test_error: f64,
    pub selected_id: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationTrace {
    pub config: RunConfig,
    pub benchmark: String,
    pub i_max: u32,
    pub records: Vec<CandidateRecord>,
    pub anytime: Vec<AnytimeEntry>,
}

impl SimulationTrace {
    pub fn evaluation_epochs(&self) -> u64 {
        self.records.iter().map(|r| r.epochs_charged as u64).sum()
    }

    pub fn objective(&self) -> ObjectivePoint {
        objective_point(self)
    }
}

/// The two minimized objectives: final error and total training epochs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectivePoint {
    pub y_l: f64,
    pub y_i: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Completion {
    pub surcharge_epochs: u64,
    pub final_valid_error: f64,
    pub final_test_error: f64,
    /// Benchmark index of the returned candidate.
    pub winner: usize,
}

/// First `n` candidates of the seed's stream, a prefix of a uniformly random
/// permutation of `0..n_candidates`. Depends only on the seed and the size.
pub fn candidate_stream(n_candidates: usize, n: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rand::seq::index::sample(&mut rng, n_candidates, n.min(n_candidates)).into_vec()
}

/// Positions (into `records`) of the `top_k` smallest observed errors,
/// ties broken by stream position.
pub fn select_topk(records: &[CandidateRecord], top_k: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..records.len()).collect();
    order.sort_by(|&a, &b| {
        records[a]
            .observed_valid_error
            .total_cmp(&records[b].observed_valid_error)
            .then(a.cmp(&b))
    });
    order.truncate(top_k);
    order
}

/// Trains the selection to completion and returns the best of it by
/// validation error at `i_max`.
pub fn complete_and_score(selection: &[&CandidateRecord], benchmark: &Benchmark) -> Completion {
    assert!(!selection.is_empty(), "selection must be nonempty");
    let i_max = benchmark.i_max();
    let surcharge_epochs = selection
        .iter()
        .filter(|r| !r.completed(i_max))
        .map(|_| i_max as u64)
        .sum();
    let winner = selection
        .iter()
        .map(|r| r.candidate)
        .reduce(|best, c| {
            if benchmark.curve(c).valid_at(i_max) < benchmark.curve(best).valid_at(i_max) {
                c
            } else {
                best
            }
        })
        .expect("nonempty");
    let curve = benchmark.curve(winner);
    Completion {
        surcharge_epochs,
        final_valid_error: curve.valid_at(i_max),
        final_test_error: curve.test_at(i_max),
        winner,
    }
}

pub fn objective_point(trace: &SimulationTrace) -> ObjectivePoint {
    let last = trace.anytime.last().expect("completed trace has anytime entries");
    ObjectivePoint {
        y_l: last.final_test_error,
        y_i: last.cumulative_epochs,
    }
}

/// Runs one seeded replay. `engine` is required for LCE policies only.
pub fn run(
    benchmark: &Benchmark,
    config: &RunConfig,
    engine: Option<&dyn Extrapolator>,
) -> Result<SimulationTrace, SimError> {
    if config.top_k == 0 {
        return Err(SimError::InvalidConfig("top_k must be >= 1".into()));
    }
    if config.n_iterations == 0 {
        return Err(SimError::InvalidConfig("n_iterations must be >= 1".into()));
    }
    let i_max = benchmark.i_max();
    let policy = Policy::new(config.policy, i_max, engine, config.check_every)?;
    if config.n_iterations > benchmark.len() {
        log::warn!(
            "{}: {} iterations requested but only {} candidates; stream ends at exhaustion",
            benchmark.name(),
            config.n_iterations,
            benchmark.len()
        );
    }

    let stream = candidate_stream(benchmark.len(), config.n_iterations, config.seed);
    let mut history = SharedHistory::default();
    let mut records = Vec::with_capacity(stream.len());
    for &candidate in &stream {
        let curve = benchmark.curve(candidate);
        let mut stop_epoch = i_max;
        for epoch in 1..i_max {
            let prefix = &curve.valid_error[..epoch as usize];
            if policy.decide(candidate, prefix, &mut history).is_stop() {
                stop_epoch = epoch;
                break;
            }
        }
        if stop_epoch == i_max {
            history.record_completion(curve.valid_at(i_max));
        }
        records.push(CandidateRecord {
            candidate,
            candidate_id: curve.candidate_id.clone(),
            stop_epoch,
            observed_valid_error: curve.valid_at(stop_epoch),
            epochs_charged: stop_epoch,
        });
    }

    let mut anytime = Vec::with_capacity(records.len());
    let mut evaluation_epochs = 0u64;
    for k in 1..=records.len() {
        evaluation_epochs += records[k - 1].epochs_charged as u64;
        let seen = &records[..k];
        let selection: Vec<&CandidateRecord> =
            select_topk(seen, config.top_k).into_iter().map(|i| &seen[i]).collect();
        let done = complete_and_score(&selection, benchmark);
        anytime.push(AnytimeEntry {
            iteration: k,
            cumulative_epochs: evaluation_epochs + done.surcharge_epochs,
            final_valid_error: done.final_valid_error,
            final_test_error: done.final_test_error,
            selected_id: benchmark.curve(done.winner).candidate_id.clone(),
        });
    }

    Ok(SimulationTrace {
        config: config.clone(),
        benchmark: benchmark.name().to_string(),
        i_max,
        records,
        anytime,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{LearningCurve, TaskKind};

    fn record(candidate: usize, stop_epoch: u32, err: f64) -> CandidateRecord {
        CandidateRecord {
            candidate,
            candidate_id: format!("c{candidate}"),
            stop_epoch,
            observed_valid_error: err,
            epochs_charged: stop_epoch,
        }
    }

    fn flat_benchmark(finals: &[f64], i_max: u32) -> Benchmark {
        let curves = finals
            .iter()
            .enumerate()
            .map(|(i, f)| LearningCurve {
                candidate_id: format!("c{i}"),
                train_error: vec![*f; i_max as usize],
                valid_error: vec![*f; i_max as usize],
                test_error: vec![*f + 0.01; i_max as usize],
            })
            .collect();
        Benchmark::new("flat", TaskKind::Regression, curves, "test").unwrap()
    }

    #[test]
    fn topk_ordering_and_ties() {
        let recs: Vec<_> = [0.3, 0.1, 0.2, 0.4]
            .iter()
            .enumerate()
            .map(|(i, e)| record(i, 1, *e))
            .collect();
        assert_eq!(select_topk(&recs, 3), vec![1, 2, 0]);
        assert_eq!(select_topk(&recs[..1], 3), vec![0]);
        let ties: Vec<_> = (0..5).map(|i| record(i, 1, 0.5)).collect();
        assert_eq!(select_topk(&ties, 3), vec![0, 1, 2]);
    }

    #[test]
    fn completion_surcharges() {
        let bench = flat_benchmark(&[0.3, 0.2, 0.1], 100);
        let none_done = [record(0, 1, 0.3), record(1, 1, 0.2), record(2, 1, 0.1)];
        let sel: Vec<_> = none_done.iter().collect();
        let c = complete_and_score(&sel, &bench);
        assert_eq!(c.surcharge_epochs, 300);
        assert_eq!(c.winner, 2);
        assert_eq!(c.final_test_error, 0.1 + 0.01);

        let all_done = [record(0, 100, 0.3), record(1, 100, 0.2), record(2, 100, 0.1)];
        let sel: Vec<_> = all_done.iter().collect();
        assert_eq!(complete_and_score(&sel, &bench).surcharge_epochs, 0);

        let mixed = [record(0, 100, 0.3), record(1, 7, 0.2), record(2, 99, 0.1)];
        let sel: Vec<_> = mixed.iter().collect();
        assert_eq!(complete_and_score(&sel, &bench).surcharge_epochs, 200);
    }

    #[test]
    fn stream_is_a_seeded_permutation() {
        let s = candidate_stream(50, 50, 3);
        let mut sorted = s.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..50).collect::<Vec<_>>());
        assert_eq!(s, candidate_stream(50, 50, 3));
        assert_ne!(s, candidate_stream(50, 50, 4));
        assert_eq!(candidate_stream(10, 20, 1).len(), 10);
    }

    #[test]
    fn bad_configs() {
        let bench = flat_benchmark(&[0.1, 0.2], 5);
        let mut cfg = RunConfig::new(PolicySpec::IEpoch { i: 1 }, 0);
        cfg.top_k = 0;
        assert!(matches!(run(&bench, &cfg, None), Err(SimError::InvalidConfig(_))));
        let cfg = RunConfig::new(PolicySpec::IEpoch { i: 6 }, 0);
        assert!(matches!(run(&bench, &cfg, None), Err(SimError::Policy(_))));
    }
}
