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


//! One seeded replay of the random-search protocol per policy: 200
//! candidates, early discarding, Top-3 retraining, and the anytime trace.
//!
//! ```text
//! cargo run --release --example simulate_protocol -- [seed]
//! ```

use lcdiscard::curves::{generate_synthetic, SyntheticSpec};
use lcdiscard::lce::{EngineConfig, Extrapolator, RoberEngine};
use lcdiscard::simulator::{run, RunConfig};
use lcdiscard::PolicySpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let seed: u64 = std::env::args().nth(1).map_or(Ok(0), |s| s.parse())?;
    let bench = generate_synthetic(&SyntheticSpec::default())?;
    let engine = RoberEngine::new(EngineConfig::default())?;
    let specs = [
        PolicySpec::IEpoch { i: 1 },
        PolicySpec::IEpoch { i: 10 },
        PolicySpec::IEpoch { i: 100 },
        PolicySpec::Sha { r: 2.0 },
        PolicySpec::Lce { rho: 0.9 },
    ];
    println!("{:<10} {:>8} {:>9} {:>10}  winner", "policy", "y_L", "y_I", "eval only");
    for spec in specs {
        let trace = run(&bench, &RunConfig::new(spec, seed), Some(&engine as &dyn Extrapolator))?;
        let y = trace.objective();
        let last = trace.anytime.last().expect("non-empty run");
        println!("{:<10} {:>8.5} {:>9} {:>10}  {}", spec.to_string(), y.y_l, y.y_i, trace.evaluation_epochs(), last.selected_id);
    }

    let trace = run(&bench, &RunConfig::new(PolicySpec::Sha { r: 2.0 }, seed), None)?;
    println!("\nanytime (r-SHA, r=2):");
    for entry in trace.anytime.iter().filter(|e| [1, 5, 25, 50, 100, 200].contains(&e.iteration)) {
        println!(
            "  k={:<3} epochs {:>5}  valid {:.5}  test {:.5}",
            entry.iteration, entry.cumulative_epochs, entry.final_valid_error, entry.final_test_error
        );
    }
    Ok(())
}
