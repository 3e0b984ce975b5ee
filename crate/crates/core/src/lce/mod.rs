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

//! Learning-curve extrapolation: MMF4 model, least-squares fit, posterior
//! sampling, and the cached engine consumed by the LCE discard policy.

mod fit;
mod mcmc;
mod mmf4;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use fit::{fit_lm, heuristic_init, FitConfig, FitResult};
pub use mcmc::{sample_posterior, McmcConfig, PosteriorDraw, PosteriorSamples};
pub use mmf4::{mmf4_eval, Mmf4Params};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LceError {
    #[error("need at least 4 anchors to fit 4 parameters, got {0}")]
    InsufficientData(usize),
    #[error("prefix contains non-finite values or non-positive epochs")]
    NonFiniteData,
    #[error("invalid MMF4 parameters {0:?}")]
    InvalidParams(Mmf4Params),
    #[error("log-posterior is not finite at the initial state")]
    NonFinitePosterior,
    #[error("invalid engine configuration: {0}")]
    InvalidConfig(String),
}

/// Fraction of posterior draws whose noise-free value at `horizon` is
/// strictly worse (greater) than the incumbent's error.
pub fn prob_worse_at_horizon(samples: &PosteriorSamples, incumbent_final_error: f64, horizon: u32) -> f64 {
    prob_worse(&samples.horizon_values(horizon as f64), incumbent_final_error)
}

/// Same as [`prob_worse_at_horizon`] over already-extrapolated values.
pub fn prob_worse(horizon_values: &[f64], incumbent_final_error: f64) -> f64 {
    if horizon_values.is_empty() {
        return 0.0;
    }
    let worse = horizon_values
        .iter()
        .filter(|v| **v > incumbent_final_error)
        .count();
    worse as f64 / horizon_values.len() as f64
}

/// Identifies one observed prefix: a candidate's curve up to `epoch`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrefixKey {
    pub candidate: usize,
    pub epoch: u32,
}

/// Source of probabilistic extrapolations for the LCE policy. Other
/// extrapolators (for example a prior-fitted network) plug in here.
pub trait Extrapolator: Send + Sync {
    fn horizon_draws(
        &self,
        key: PrefixKey,
        prefix: &[(f64, f64)],
        horizon: u32,
    ) -> Result<Arc<Vec<f64>>, LceError>;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EngineConfig {
    pub fit: FitConfig,
    pub mcmc: McmcConfig,
    pub seed: u64,
    /// Memoize posterior draws per (candidate, epoch).
    pub cache: bool,
    /// Check every n-th epoch once enough anchors exist.
    pub check_every: u32,
}

impl Default for EngineConfig {
    fn default() -> Self {
        Self {
            fit: FitConfig::default(),
            mcmc: McmcConfig::default(),
            seed: 0,
            cache: true,
            check_every: 1,
        }
    }
}

/// LM fit followed by Metropolis sampling around the fitted parameters.
///
/// The sampler seed is derived from the engine seed and the prefix key, so a
/// cached and an uncached engine return identical draws. One engine serves one
/// benchmark: candidate indices are only unique within it.
pub struct RoberEngine {
    config: EngineConfig,
    cache: Option<Mutex<HashMap<(PrefixKey, u32), Arc<Vec<f64>>>>>,
}

impl RoberEngine {
    pub fn new(config: EngineConfig) -> Result<Self, LceError> {
        config.mcmc.validate()?;
        if config.check_every == 0 {
            return Err(LceError::InvalidConfig("check_every must be >= 1".into()));
        }
        let cache = config.cache.then(|| Mutex::new(HashMap::new()));
        Ok(Self { config, cache })
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn cached_entries(&self) -> usize {
        self.cache
            .as_ref()
            .map_or(0, |c| c.lock().expect("cache poisoned").len())
    }

    /// Fit then sample for one prefix, returning the full posterior.
    pub fn posterior(&self, key: PrefixKey, prefix: &[(f64, f64)]) -> Result<PosteriorSamples, LceError> {
        let seed = prefix_seed(self.config.seed, key);
        let fit_config = FitConfig {
            seed,
            ..self.config.fit.clone()
        };
        let mut fit = fit_lm(prefix, &fit_config)?;
        if !fit.converged {
            log::debug!("fit did not converge for {key:?}; centering prior on the heuristic start");
            let init = heuristic_init(prefix);
            fit.params = init;
        }
        sample_posterior(prefix, &fit, &self.config.mcmc, seed)
    }

    fn compute(&self, key: PrefixKey, prefix: &[(f64, f64)], horizon: u32) -> Result<Vec<f64>, LceError> {
        Ok(self.posterior(key, prefix)?.horizon_values(horizon as f64))
    }
}

impl Extrapolator for RoberEngine {
    fn horizon_draws(
        &self,
        key: PrefixKey,
        prefix: &[(f64, f64)],
        horizon: u32,
    ) -> Result<Arc<Vec<f64>>, LceError> {
        let Some(cache) = &self.cache else {
            return self.compute(key, prefix, horizon).map(Arc::new);
        };
        if let Some(hit) = cache.lock().expect("cache poisoned").get(&(key, horizon)) {
            return Ok(Arc::clone(hit));
        }
        let values = Arc::new(self.compute(key, prefix, horizon)?);
        cache
            .lock()
            .expect("cache poisoned")
            .insert((key, horizon), Arc::clone(&values));
        Ok(values)
    }
}

/// SplitMix64 finalizer over the engine seed and prefix key.
fn prefix_seed(seed: u64, key: PrefixKey) -> u64 {
    let mut z = seed
        ^ (key.candidate as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ (key.epoch as u64).wrapping_mul(0xC2B2_AE3D_27D4_EB4F);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
