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


//! Synthetic benchmark generation with controllable rank stability and
//! diverging curves, written out in the canonical curve format.
//!
//! ```text
//! cargo run --example generate_benchmark -- [out.csv]
//! ```

use lcdiscard::curves::{canonical_export, generate_synthetic, SyntheticSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "synthetic.csv".into());
    for (stability, diverging) in [(0.95, 0.0), (0.3, 0.0), (0.9, 0.8)] {
        let spec = SyntheticSpec {
            rank_stability: stability,
            fraction_diverging: diverging,
            ..SyntheticSpec::default()
        };
        let bench = generate_synthetic(&spec)?;
        println!(
            "rank_stability {stability:.2} diverging {diverging:.1}: {} curves, epoch-1/final spearman {:.3}, worse than constant {:.1}%",
            bench.len(),
            bench.rank_stability(),
            100.0 * bench.worse_than_constant_fraction()
        );
    }

    let bench = generate_synthetic(&SyntheticSpec::default())?;
    canonical_export(&bench, out.as_ref())?;
    let c = &bench.curves()[0];
    println!("wrote {out}; first curve {}: epoch 1 {:.3}, epoch 10 {:.3}, epoch 100 {:.3}", c.candidate_id, c.valid_at(1), c.valid_at(10), c.valid_at(100));
    Ok(())
}
