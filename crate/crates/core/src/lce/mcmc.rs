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

//! Random-walk Metropolis over `(a, b, c, d, sigma)`.
//!
//! Target density: Gaussian likelihood of the prefix residuals with scale
//! `sigma`, an independent `N(theta_hat, 1)` prior on each raw MMF4
//! parameter, and an `Exponential(1)` prior on `sigma`. Components are updated
//! one at a time in a fixed cycle; proposal scales start from the conditional
//! Laplace widths at the fit and are tuned during burn-in.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{FitResult, LceError, Mmf4Params};

const N_COMPONENTS: usize = 5;
const SIGMA: usize = 4;
const ADAPT_BATCH: usize = 20;
const MIN_SIGMA_START: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct McmcConfig {
    pub steps: usize,
    pub burn_in: usize,
    pub thin: usize,
    pub target_acceptance: f64,
}

impl Default for McmcConfig {
    fn default() -> Self {
        Self {
            steps: 3000,
            burn_in: 1000,
            thin: 10,
            target_acceptance: 0.25,
        }
    }
}

impl McmcConfig {
    pub fn n_draws(&self) -> usize {
        if self.thin == 0 || self.steps <= self.burn_in {
            return 0;
        }
        (self.steps - self.burn_in) / self.thin
    }

    pub fn validate(&self) -> Result<(), LceError> {
        if self.n_draws() < 100 {
            return Err(LceError::InvalidConfig(format!(
                "mcmc settings yield {} draws, need at least 100",
                self.n_draws()
            )));
        }
        if !(self.target_acceptance > 0.0 && self.target_acceptance < 1.0) {
            return Err(LceError::InvalidConfig(
                "target_acceptance must lie in (0, 1)".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PosteriorDraw {
    pub params: Mmf4Params,
    pub noise_scale: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PosteriorSamples {
    pub draws: Vec<PosteriorDraw>,
    /// Acceptance rate after burn-in.
    pub acceptance_rate: f64,
    pub seed: u64,
}

impl PosteriorSamples {
    pub fn horizon_values(&self, horizon: f64) -> Vec<f64> {
        self.draws.iter().map(|d| d.params.eval(horizon)).collect()
    }
}

struct Target<'a> {
    ln_x: Vec<f64>,
    y: Vec<f64>,
    center: &'a Mmf4Params,
}

impl Target<'_> {
    fn log_density(&self, state: &[f64; N_COMPONENTS]) -> f64 {
        let sigma = state[SIGMA];
        if !(sigma > 0.0) || !(state[1] > 0.0) {
            return f64::NEG_INFINITY;
        }
        let p = Mmf4Params {
            a: state[0],
            b: state[1],
            c: state[2],
            d: state[3],
        };
        let sse: f64 = self
            .ln_x
            .iter()
            .zip(&self.y)
            .map(|(lx, y)| (p.eval_ln(*lx) - y).powi(2))
            .sum();
        let n = self.y.len() as f64;
        let log_lik = -n * sigma.ln() - sse / (2.0 * sigma * sigma);
        let center = self.center.to_array();
        let log_prior: f64 = (0..4).map(|j| -0.5 * (state[j] - center[j]).powi(2)).sum();
        let value = log_lik + log_prior - sigma;
        if value.is_nan() {
            f64::NEG_INFINITY
        } else {
            value
        }
    }
}

/// Proposal widths from the conditional curvature at the fit.
fn initial_scales(target: &Target<'_>, sigma: f64) -> [f64; N_COMPONENTS] {
    let p = target.center;
    let spread = p.a - p.c;
    let mut diag = [0.0; 4];
    for lx in &target.ln_x {
        let w = p.weight_ln(*lx);
        let shape = spread * w * (1.0 - w);
        let grad = [w, shape / p.b, 1.0 - w, -shape * lx];
        for j in 0..4 {
            diag[j] += grad[j] * grad[j];
        }
    }
    let mut scales = [0.0; N_COMPONENTS];
    for j in 0..4 {
        scales[j] = 2.4 / (diag[j] / (sigma * sigma) + 1.0).sqrt();
    }
    scales[SIGMA] = 2.4 * sigma / (2.0 * target.y.len() as f64).sqrt();
    scales
}

pub fn sample_posterior(
    prefix: &[(f64, f64)],
    fit: &FitResult,
    config: &McmcConfig,
    seed: u64,
) -> Result<PosteriorSamples, LceError> {
    if prefix.len() < 4 {
        return Err(LceError::InsufficientData(prefix.len()));
    }
    config.validate()?;
    let target = Target {
        ln_x: prefix.iter().map(|(x, _)| x.ln()).collect(),
        y: prefix.iter().map(|(_, y)| *y).collect(),
        center: &fit.params,
    };
    let sigma0 = (fit.sse / prefix.len() as f64).sqrt().max(MIN_SIGMA_START);
    let p = fit.params;
    let mut state = [p.a, p.b, p.c, p.d, sigma0];
    let mut log_density = target.log_density(&state);
    if !log_density.is_finite() {
        return Err(LceError::NonFinitePosterior);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut scales = initial_scales(&target, sigma0);
    for s in scales.iter_mut() {
        if !(s.is_finite() && *s > 0.0) {
            *s = 1e-3;
        }
    }
    let mut batch_accepts = [0usize; N_COMPONENTS];
    let mut batch_counts = [0usize; N_COMPONENTS];
    let mut accepted_after_burn_in = 0usize;
    let mut draws = Vec::with_capacity(config.n_draws());

    for step in 0..config.steps {
        let k = step % N_COMPONENTS;
        let z: f64 = rng.sample(StandardNormal);
        let mut proposal = state;
        proposal[k] += scales[k] * z;
        let proposal_density = target.log_density(&proposal);
        let accept = proposal_density.is_finite()
            && (proposal_density >= log_density
                || rng.random::<f64>().ln() < proposal_density - log_density);
        if accept {
            state = proposal;
            log_density = proposal_density;
        }

        if step < config.burn_in {
            batch_counts[k] += 1;
            batch_accepts[k] += accept as usize;
            if batch_counts[k] == ADAPT_BATCH {
                let rate = batch_accepts[k] as f64 / ADAPT_BATCH as f64;
                scales[k] *= (1.5 * (rate - config.target_acceptance)).exp();
                batch_counts[k] = 0;
                batch_accepts[k] = 0;
            }
        } else {
            accepted_after_burn_in += accept as usize;
            if (step - config.burn_in + 1) % config.thin == 0 {
                draws.push(PosteriorDraw {
                    params: Mmf4Params {
                        a: state[0],
                        b: state[1],
                        c: state[2],
                        d: state[3],
                    },
                    noise_scale: state[SIGMA],
                });
            }
        }
    }

    Ok(PosteriorSamples {
        draws,
        acceptance_rate: accepted_after_burn_in as f64 / (config.steps - config.burn_in) as f64,
        seed,
    })
}
