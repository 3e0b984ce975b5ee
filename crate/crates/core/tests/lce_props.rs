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


mod common;

use std::sync::Arc;

use lcdiscard::lce::{
    fit_lm, heuristic_init, mmf4_eval, prob_worse, prob_worse_at_horizon, sample_posterior, EngineConfig,
    Extrapolator, FitConfig, LceError, McmcConfig, Mmf4Params, PosteriorDraw, PosteriorSamples, PrefixKey,
    RoberEngine,
};
use lcdiscard::stats::{mean, spearman};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn params() -> impl Strategy<Value = Mmf4Params> {
    (0.3f64..1.2, 0.1f64..50.0, 0.0f64..0.8, 0.2f64..3.0).prop_map(|(a, b, c, d)| Mmf4Params::new(a, b, c, d).unwrap())
}

fn noisy_prefix(p: &Mmf4Params, n: usize, sd: f64, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let z = Normal::new(0.0, 1.0).unwrap();
    (1..=n)
        .map(|e| (e as f64, mmf4_eval(p, e as f64) + sd * z.sample(&mut rng)))
        .collect()
}

fn posterior_sd(values: &[f64]) -> f64 {
    let m = mean(values);
    (values.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (values.len() - 1) as f64).sqrt()
}

#[test]
fn mmf4_examples() {
    let flat = Mmf4Params::new(0.4, 3.0, 0.4, 0.7).unwrap();
    assert!((mmf4_eval(&flat, 17.0) - 0.4).abs() < 1e-15);
    let mid = Mmf4Params::new(1.0, 8.0, 0.0, 3.0).unwrap();
    assert_eq!(mmf4_eval(&mid, 2.0), 0.5);
    let limit = Mmf4Params::new(1.0, 1.0, 0.1, 1.0).unwrap();
    assert!((mmf4_eval(&limit, 1e300) - 0.1).abs() < 1e-12);
    // x^d overflows: the horizon asymptote is returned
    let steep = Mmf4Params::new(1.0, 1.0, 0.1, 400.0).unwrap();
    assert_eq!(mmf4_eval(&steep, 1e10), 0.1);
    assert!(Mmf4Params::new(1.0, 0.0, 0.1, 1.0).is_err());
}

proptest! {
    #[test]
    fn mmf4_monotone_in_epoch(p in params()) {
        prop_assume!((p.a - p.c).abs() > 1e-6);
        let values: Vec<f64> = (0..400).map(|k| mmf4_eval(&p, 1.0 + k as f64 * 0.25)).collect();
        for w in values.windows(2) {
            if p.a > p.c {
                prop_assert!(w[1] <= w[0]);
            } else {
                prop_assert!(w[1] >= w[0]);
            }
        }
        // strictly monotone where the difference is resolvable
        let first = values[0];
        let last = values[values.len() - 1];
        let moved = if p.a > p.c { last < first } else { last > first };
        prop_assert!(moved);
    }

    #[test]
    fn prob_worse_non_increasing_in_incumbent(
        draws in prop::collection::vec(0.0f64..1.0, 1..200),
        i1 in 0.0f64..1.0,
        i2 in 0.0f64..1.0,
    ) {
        let (lo, hi) = if i1 <= i2 { (i1, i2) } else { (i2, i1) };
        prop_assert!(prob_worse(&draws, lo) >= prob_worse(&draws, hi));
    }

    #[test]
    fn fit_never_worse_than_initialization(p in params(), sd in 0.0f64..0.05, n in 4usize..25, seed in 0u64..1000) {
        let prefix = noisy_prefix(&p, n, sd, seed);
        let fit = fit_lm(&prefix, &FitConfig::default()).unwrap();
        let start = heuristic_init(&prefix);
        let start_sse: f64 = prefix.iter().map(|(x, y)| (mmf4_eval(&start, *x) - y).powi(2)).sum();
        prop_assert!(fit.sse <= fit.initial_sse);
        prop_assert!(fit.sse <= start_sse * (1.0 + 1e-12));
        prop_assert!(fit.params.validate().is_ok());
    }
}

#[test]
fn prob_worse_examples() {
    let constant = |v: f64| PosteriorDraw {
        params: Mmf4Params::new(v, 1.0, v, 1.0).unwrap(),
        noise_scale: 0.01,
    };
    let samples = |vs: &[f64]| PosteriorSamples {
        draws: vs.iter().map(|v| constant(*v)).collect(),
        acceptance_rate: 0.3,
        seed: 0,
    };
    assert_eq!(prob_worse_at_horizon(&samples(&[0.9; 100]), 0.5, 100), 1.0);
    assert_eq!(prob_worse_at_horizon(&samples(&[0.1; 100]), 0.5, 100), 0.0);
    let half: Vec<f64> = (0..100).map(|k| if k % 2 == 0 { 0.7 } else { 0.3 }).collect();
    assert_eq!(prob_worse_at_horizon(&samples(&half), 0.5, 100), 0.5);
    // ties are not worse
    assert_eq!(prob_worse_at_horizon(&samples(&[0.5; 10]), 0.5, 100), 0.0);
}

#[test]
fn posterior_is_deterministic_per_seed() {
    let truth = Mmf4Params::new(0.9, 5.0, 0.15, 1.2).unwrap();
    let prefix = noisy_prefix(&truth, 15, 0.01, 1);
    let fit = fit_lm(&prefix, &FitConfig::default()).unwrap();
    let cfg = McmcConfig::default();
    let a = sample_posterior(&prefix, &fit, &cfg, 42).unwrap();
    let b = sample_posterior(&prefix, &fit, &cfg, 42).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.draws.len(), 200);
    assert!(a.draws.iter().all(|d| d.noise_scale > 0.0));
    let c = sample_posterior(&prefix, &fit, &cfg, 43).unwrap();
    assert_ne!(a.draws, c.draws);
    assert!(matches!(sample_posterior(&prefix[..3], &fit, &cfg, 0), Err(LceError::InsufficientData(3))));
}

#[test]
fn posterior_mean_agrees_with_least_squares() {
    let truth = Mmf4Params::new(0.85, 4.0, 0.12, 1.1).unwrap();
    let prefix = noisy_prefix(&truth, 30, 0.002, 7);
    let fit = fit_lm(&prefix, &FitConfig::default()).unwrap();
    let post = sample_posterior(&prefix, &fit, &McmcConfig::default(), 3).unwrap();
    let values = post.horizon_values(100.0);
    let gap = (mean(&values) - fit.params.eval(100.0)).abs();
    assert!(gap <= 3.0 * posterior_sd(&values), "gap {gap} sd {}", posterior_sd(&values));
}

#[test]
fn acceptance_rate_in_band_on_synthetic_prefixes() {
    let bench = common::synthetic(100, 0.9, 12);
    let cfg = McmcConfig::default();
    let mut in_band = 0;
    for (k, curve) in bench.curves().iter().enumerate() {
        let n = 4 + (k * 7) % 27;
        let prefix: Vec<(f64, f64)> = curve.valid_error[..n]
            .iter()
            .enumerate()
            .map(|(i, v)| ((i + 1) as f64, *v))
            .collect();
        let fit = fit_lm(&prefix, &FitConfig::default()).unwrap();
        let post = sample_posterior(&prefix, &fit, &cfg, k as u64).unwrap();
        if (0.1..=0.6).contains(&post.acceptance_rate) {
            in_band += 1;
        }
    }
    assert!(in_band >= 90, "{in_band} of 100 in band");
}

#[test]
fn posterior_concentrates_as_noise_shrinks() {
    let truth = Mmf4Params::new(0.9, 6.0, 0.2, 1.3).unwrap();
    let mut spreads = Vec::new();
    for sd in [0.05, 0.01, 0.002] {
        // same underlying standard normal draws, scaled
        let prefix = noisy_prefix(&truth, 20, sd, 11);
        let fit = fit_lm(&prefix, &FitConfig::default()).unwrap();
        let post = sample_posterior(&prefix, &fit, &McmcConfig::default(), 5).unwrap();
        spreads.push(posterior_sd(&post.horizon_values(100.0)));
    }
    assert!(spreads[0] > spreads[1] && spreads[1] > spreads[2], "{spreads:?}");
}

#[test]
fn cached_and_uncached_engines_agree() {
    let truth = Mmf4Params::new(0.8, 3.0, 0.3, 0.9).unwrap();
    let prefix = noisy_prefix(&truth, 8, 0.01, 2);
    let cached = RoberEngine::new(EngineConfig::default()).unwrap();
    let plain = RoberEngine::new(EngineConfig {
        cache: false,
        ..EngineConfig::default()
    })
    .unwrap();
    let key = PrefixKey { candidate: 4, epoch: 8 };
    let a = cached.horizon_draws(key, &prefix, 100).unwrap();
    let again = cached.horizon_draws(key, &prefix, 100).unwrap();
    let b = plain.horizon_draws(key, &prefix, 100).unwrap();
    assert!(Arc::ptr_eq(&a, &again));
    assert_eq!(*a, *b);
    assert_eq!(cached.cached_entries(), 1);
    assert_eq!(plain.cached_entries(), 0);
    let other = cached.horizon_draws(PrefixKey { candidate: 5, epoch: 8 }, &prefix, 100).unwrap();
    assert_ne!(*a, *other);
}

#[test]
fn generator_curves_have_spearman_bounded_by_one() {
    let bench = common::synthetic(200, 0.9, 1);
    let first: Vec<f64> = bench.curves().iter().map(|c| c.valid_error[0]).collect();
    let last: Vec<f64> = bench.curves().iter().map(|c| c.valid_at(100)).collect();
    let rho = spearman(&first, &last);
    assert!((rho - bench.rank_stability()).abs() < 1e-12);
    assert!(rho > 0.5 && rho <= 1.0);
}
