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

//! Replay simulator for early-discarding policies in neural-network
//! hyperparameter optimization.
//!
//! Pre-computed (or synthetic) learning curves are replayed through a seeded
//! random-search loop. Each candidate is trained epoch by epoch until a
//! discard policy stops it; after the loop the top three candidates are
//! trained to completion and the best is returned. Every run yields a pair
//! of objectives, final test error and total epochs, which are then compared
//! across policies with Pareto fronts and log-scaled hypervolumes.
//!
//! | module | contents |
//! |---|---|
//! | [`metrics`] | R2 and prediction advantage, generalization error |
//! | [`curves`] | benchmarks, canonical file format, synthetic generator |
//! | [`lce`] | MMF4 model, Levenberg-Marquardt fit, Metropolis posterior |
//! | [`policy`] | i-Epoch, r-SHA and rho-LCE decisions |
//! | [`simulator`] | the replay loop and epoch accounting |
//! | [`moo`] | Pareto fronts, hypervolume, relative-HVI and ranks |
//! | [`experiment`] | grid runs, resume, analysis tables |
//!
//! See the crate's `examples/` directory for one runnable program per
//! capability.

pub mod curves;
pub mod experiment;
pub mod lce;
pub mod metrics;
pub mod moo;
pub mod policy;
pub mod simulator;
pub mod stats;

pub use curves::{Benchmark, LearningCurve, SyntheticSpec, TaskKind};
pub use policy::{PolicyKind, PolicySpec};
pub use simulator::{ObjectivePoint, RunConfig, SimulationTrace};
