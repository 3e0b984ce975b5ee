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


//! Learning-curve extrapolation: a Levenberg-Marquardt MMF4 fit, Metropolis
//! posterior draws, and the probability that the candidate ends up worse than
//! an incumbent.
//!
//! ```text
//! cargo run --release --example lce_extrapolation
//! ```

use lcdiscard::curves::{generate_synthetic, SyntheticSpec};
use lcdiscard::lce::{fit_lm, prob_worse_at_horizon, sample_posterior, FitConfig, McmcConfig};
use lcdiscard::stats::mean;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let bench = generate_synthetic(&SyntheticSpec::default())?;
    let i_max = bench.i_max();
    let best = bench
        .curves()
        .iter()
        .map(|c| c.valid_at(i_max))
        .fold(f64::INFINITY, f64::min);
    let curve = &bench.curves()[7];
    println!("candidate {}: final validation error {:.4}, benchmark best {best:.4}", curve.candidate_id, curve.valid_at(i_max));

    // very short prefixes can extrapolate below zero; the policy then keeps training
    for n in [6, 12, 24, 48] {
        let prefix: Vec<(f64, f64)> = (1..=n).map(|e| (e as f64, curve.valid_at(e))).collect();
        let fit = fit_lm(&prefix, &FitConfig::default())?;
        let post = sample_posterior(&prefix, &fit, &McmcConfig::default(), 1)?;
        let horizon = post.horizon_values(i_max as f64);
        println!(
            "{n:>2} epochs: LM says {:.4} (sse {:.1e}), posterior mean {:.4}, acceptance {:.2}, P(worse than best) {:.2}",
            fit.params.eval(i_max as f64),
            fit.sse,
            mean(&horizon),
            post.acceptance_rate,
            prob_worse_at_horizon(&post, best, i_max)
        );
    }
    Ok(())
}
