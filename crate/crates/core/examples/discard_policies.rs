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


//! The three discard policies deciding on single curves: i-Epoch, r-SHA with
//! its rung schedule, and rho-LCE against an incumbent.
//!
//! ```text
//! cargo run --release --example discard_policies
//! ```

use lcdiscard::curves::{generate_synthetic, SyntheticSpec};
use lcdiscard::lce::{EngineConfig, RoberEngine};
use lcdiscard::policy::{sha_rungs, Policy, PolicySpec, SharedHistory};

fn stop_epoch(policy: &Policy<'_>, candidate: usize, curve: &[f64], history: &mut SharedHistory) -> usize {
    (1..curve.len())
        .find(|&n| policy.decide(candidate, &curve[..n], history).is_stop())
        .unwrap_or(curve.len())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for r in [1.19, 1.41, 2.0, 8.0, 64.0] {
        println!("SHA r={r:<5} rungs {:?}", sha_rungs(1, 100, r)?);
    }

    let bench = generate_synthetic(&SyntheticSpec::default())?;
    let engine = RoberEngine::new(EngineConfig::default())?;
    let specs = [
        PolicySpec::IEpoch { i: 10 },
        PolicySpec::Sha { r: 2.0 },
        PolicySpec::Lce { rho: 0.9 },
    ];
    for spec in specs {
        let policy = Policy::new(spec, bench.i_max(), Some(&engine), 1)?;
        // one shared history: the first candidate sets the bar for the rest
        let mut history = SharedHistory::default();
        let stops: Vec<usize> = (0..12)
            .map(|c| {
                let curve = &bench.curve(c).valid_error;
                let stop = stop_epoch(&policy, c, curve, &mut history);
                if stop == curve.len() {
                    history.record_completion(curve[stop - 1]);
                }
                stop
            })
            .collect();
        println!("{:<10} stop epochs {stops:?}", spec.to_string());
    }
    Ok(())
}
