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

//! Vertical early-discarding rules: i-Epoch, r-SHA and rho-LCE.
//!
//! Each rule looks at one candidate's validation curve prefix (and, for SHA
//! and LCE, what earlier candidates achieved) and decides whether to keep
//! training it.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lce::{prob_worse, Extrapolator, PrefixKey};

/// Minimum number of anchors before LCE tries to extrapolate.
pub const LCE_MIN_ANCHORS: usize = 4;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolicyError {
    #[error("invalid parameter for {kind}: {message}")]
    InvalidParameter { kind: PolicyKind, message: String },
    #[error("unknown policy kind {0:?} (expected iepoch, sha or lce)")]
    UnknownKind(String),
    #[error("the LCE policy needs an extrapolation engine")]
    MissingEngine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PolicyKind {
    Sha,
    Lce,
    #[serde(rename = "iepoch")]
    IEpoch,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 3] = [PolicyKind::Sha, PolicyKind::Lce, PolicyKind::IEpoch];

    /// Identifier used in configuration files and output paths.
    pub fn id(self) -> &'static str {
        match self {
            PolicyKind::IEpoch => "iepoch",
            PolicyKind::Sha => "sha",
            PolicyKind::Lce => "lce",
        }
    }

    /// Display name used as a report column header.
    pub fn label(self) -> &'static str {
        match self {
            PolicyKind::IEpoch => "i-Epoch",
            PolicyKind::Sha => "r-SHA",
            PolicyKind::Lce => "rho-LCE",
        }
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for PolicyKind {
    type Err = PolicyError;

    fn from_str(s: &str) -> Result<Self, PolicyError> {
        match s {
            "iepoch" => Ok(PolicyKind::IEpoch),
            "sha" => Ok(PolicyKind::Sha),
            "lce" => Ok(PolicyKind::Lce),
            other => Err(PolicyError::UnknownKind(other.to_string())),
        }
    }
}

/// One discard rule together with its aggressiveness setting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PolicySpec {
    /// Train every candidate for exactly `i` epochs.
    #[serde(rename = "iepoch")]
    IEpoch { i: u32 },
    /// Keep a candidate at a rung only if it is in the top `100/r` percent.
    Sha { r: f64 },
    /// Drop a candidate once it is worse than the incumbent with probability
    /// at least `rho`.
    Lce { rho: f64 },
}

impl PolicySpec {
    pub fn kind(&self) -> PolicyKind {
        match self {
            PolicySpec::IEpoch { .. } => PolicyKind::IEpoch,
            PolicySpec::Sha { .. } => PolicyKind::Sha,
            PolicySpec::Lce { .. } => PolicyKind::Lce,
        }
    }

    pub fn parameter(&self) -> f64 {
        match *self {
            PolicySpec::IEpoch { i } => i as f64,
            PolicySpec::Sha { r } => r,
            PolicySpec::Lce { rho } => rho,
        }
    }

    pub fn from_parts(kind: PolicyKind, parameter: f64) -> Result<Self, PolicyError> {
        let spec = match kind {
            PolicyKind::IEpoch => {
                if parameter.fract() != 0.0 || parameter < 1.0 {
                    return Err(PolicyError::InvalidParameter {
                        kind,
                        message: format!("i must be a positive integer, got {parameter}"),
                    });
                }
                PolicySpec::IEpoch { i: parameter as u32 }
            }
            PolicyKind::Sha => PolicySpec::Sha { r: parameter },
            PolicyKind::Lce => PolicySpec::Lce { rho: parameter },
        };
        Ok(spec)
    }

    pub fn validate(&self, i_max: u32) -> Result<(), PolicyError> {
        let invalid = |message: String| {
            Err(PolicyError::InvalidParameter {
                kind: self.kind(),
                message,
            })
        };
        match *self {
            PolicySpec::IEpoch { i } if !(1..=i_max).contains(&i) => {
                invalid(format!("i={i} outside [1, {i_max}]"))
            }
            PolicySpec::Sha { r } if !(r > 1.0 && r.is_finite()) => invalid(format!("r={r} must exceed 1")),
            PolicySpec::Lce { rho } if !(rho > 0.0 && rho < 1.0) => {
                invalid(format!("rho={rho} outside (0, 1)"))
            }
            _ => Ok(()),
        }
    }

    /// Stable text form of the parameter for file names and tables.
    pub fn parameter_label(&self) -> String {
        match *self {
            PolicySpec::IEpoch { i } => i.to_string(),
            PolicySpec::Sha { r } => format_param(r),
            PolicySpec::Lce { rho } => format_param(rho),
        }
    }
}

fn format_param(v: f64) -> String {
    let s = v.to_string();
    if s.contains('.') {
        s
    } else {
        format!("{s}.0")
    }
}

impl fmt::Display for PolicySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}", self.kind(), self.parameter_label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Action {
    Continue,
    Stop,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reason {
    EpochLimit,
    RungRank,
    NotARung,
    HorizonProbability,
    InsufficientData,
    /// Extrapolation failed; LCE never discards on a failed fit.
    EngineFailure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decision {
    pub action: Action,
    pub reason: Reason,
}

impl Decision {
    pub fn new(action: Action, reason: Reason) -> Self {
        Self { action, reason }
    }

    pub fn is_stop(&self) -> bool {
        self.action == Action::Stop
    }
}

/// What earlier candidates of the same run have shown.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SharedHistory {
    /// Validation errors recorded at each SHA rung epoch.
    pub rung_scores: BTreeMap<u32, Vec<f64>>,
    /// Best validation error at `i_max` among fully trained candidates.
    pub best_final_error: Option<f64>,
}

impl SharedHistory {
    pub fn record_completion(&mut self, final_valid_error: f64) {
        self.best_final_error = Some(match self.best_final_error {
            Some(best) => best.min(final_valid_error),
            None => final_valid_error,
        });
    }
}

pub fn iepoch_decide(current_epoch: u32, i: u32) -> Decision {
    let action = if current_epoch < i {
        Action::Continue
    } else {
        Action::Stop
    };
    Decision::new(action, Reason::EpochLimit)
}

/// Geometric rung schedule `round(i_min * r^k) <= i_max`, deduplicated.
pub fn sha_rungs(i_min: u32, i_max: u32, r: f64) -> Result<Vec<u32>, PolicyError> {
    if !(r > 1.0 && r.is_finite()) || i_min < 1 || i_max < i_min {
        return Err(PolicyError::InvalidParameter {
            kind: PolicyKind::Sha,
            message: format!("need r > 1 and 1 <= i_min <= i_max (r={r}, i_min={i_min}, i_max={i_max})"),
        });
    }
    let mut rungs: Vec<u32> = Vec::new();
    for k in 0.. {
        let rung = (i_min as f64 * r.powi(k)).round();
        if rung > i_max as f64 {
            break;
        }
        let rung = rung as u32;
        if rungs.last() != Some(&rung) {
            rungs.push(rung);
        }
    }
    Ok(rungs)
}

/// Rung survival test. With `m` scores at the rung including the current
/// one, the candidate survives if its rank (ties in its favour) is at most
/// `max(1, floor(m / r))`. The score is recorded either way.
pub fn sha_decide(
    current_epoch: u32,
    current_valid_error: f64,
    history: &mut SharedHistory,
    r: f64,
    rungs: &[u32],
) -> Decision {
    if rungs.binary_search(&current_epoch).is_err() {
        return Decision::new(Action::Continue, Reason::NotARung);
    }
    let scores = history.rung_scores.entry(current_epoch).or_default();
    let m = scores.len() + 1;
    let quota = ((m as f64 / r).floor() as usize).max(1);
    let rank = 1 + scores.iter().filter(|s| **s < current_valid_error).count();
    scores.push(current_valid_error);
    let action = if rank <= quota {
        Action::Continue
    } else {
        Action::Stop
    };
    Decision::new(action, Reason::RungRank)
}

/// Extrapolation-based test against the best fully trained candidate.
pub fn lce_decide(
    key: PrefixKey,
    valid_prefix: &[f64],
    history: &SharedHistory,
    rho: f64,
    horizon: u32,
    engine: &dyn Extrapolator,
) -> Decision {
    let Some(incumbent) = history.best_final_error else {
        return Decision::new(Action::Continue, Reason::InsufficientData);
    };
    if valid_prefix.len() < LCE_MIN_ANCHORS {
        return Decision::new(Action::Continue, Reason::InsufficientData);
    }
    let anchors: Vec<(f64, f64)> = valid_prefix
        .iter()
        .enumerate()
        .map(|(i, v)| ((i + 1) as f64, *v))
        .collect();
    match engine.horizon_draws(key, &anchors, horizon) {
        Ok(draws) => {
            let p = prob_worse(&draws, incumbent);
            let action = if p >= rho { Action::Stop } else { Action::Continue };
            Decision::new(action, Reason::HorizonProbability)
        }
        Err(err) => {
            log::warn!("extrapolation failed for {key:?}: {err}; continuing");
            Decision::new(Action::Continue, Reason::EngineFailure)
        }
    }
}

/// A [`PolicySpec`] bound to a benchmark horizon, ready to make decisions.
pub enum Policy<'e> {
    IEpoch {
        i: u32,
    },
    Sha {
        r: f64,
        rungs: Vec<u32>,
    },
    Lce {
        rho: f64,
        horizon: u32,
        check_every: u32,
        engine: &'e dyn Extrapolator,
    },
}

impl<'e> Policy<'e> {
    pub fn new(
        spec: PolicySpec,
        i_max: u32,
        engine: Option<&'e dyn Extrapolator>,
        check_every: u32,
    ) -> Result<Self, PolicyError> {
        spec.validate(i_max)?;
        Ok(match spec {
            PolicySpec::IEpoch { i } => Policy::IEpoch { i },
            PolicySpec::Sha { r } => Policy::Sha {
                r,
                rungs: sha_rungs(1, i_max, r)?,
            },
            PolicySpec::Lce { rho } => Policy::Lce {
                rho,
                horizon: i_max,
                check_every: check_every.max(1),
                engine: engine.ok_or(PolicyError::MissingEngine)?,
            },
        })
    }

    /// Decides after observing `valid_prefix.len()` epochs of `candidate`.
    pub fn decide(&self, candidate: usize, valid_prefix: &[f64], history: &mut SharedHistory) -> Decision {
        let epoch = valid_prefix.len() as u32;
        match self {
            Policy::IEpoch { i } => iepoch_decide(epoch, *i),
            Policy::Sha { r, rungs } => {
                sha_decide(epoch, valid_prefix[epoch as usize - 1], history, *r, rungs)
            }
            Policy::Lce {
                rho,
                horizon,
                check_every,
                engine,
            } => {
                let due = valid_prefix.len() >= LCE_MIN_ANCHORS
                    && (valid_prefix.len() - LCE_MIN_ANCHORS) % *check_every as usize == 0;
                if !due && valid_prefix.len() >= LCE_MIN_ANCHORS {
                    return Decision::new(Action::Continue, Reason::InsufficientData);
                }
                lce_decide(
                    PrefixKey { candidate, epoch },
                    valid_prefix,
                    history,
                    *rho,
                    *horizon,
                    *engine,
                )
            }
        }
    }
}
