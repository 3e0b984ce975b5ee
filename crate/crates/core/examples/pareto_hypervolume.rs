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


//! Multi-objective comparison: sweep each policy's aggressiveness over ten
//! seeds, then compute Pareto fronts, log-scaled hypervolumes, relative HVI
//! per method and the average rank over two benchmarks.
//!
//! ```text
//! cargo run --release --example pareto_hypervolume
//! ```

use std::collections::BTreeMap;

use lcdiscard::curves::{generate_synthetic, SyntheticSpec};
use lcdiscard::experiment::{LCE_SWEEP, SHA_SWEEP};
use lcdiscard::lce::{EngineConfig, RoberEngine};
use lcdiscard::moo::{average_rank, pareto_front, reference_point, relative_hvi, MethodCell, Point2};
use lcdiscard::simulator::{run, RunConfig};
use lcdiscard::PolicySpec;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut specs: Vec<PolicySpec> = [1, 2, 3, 5, 10, 20, 50, 100].map(|i| PolicySpec::IEpoch { i }).to_vec();
    specs.extend(SHA_SWEEP.iter().map(|&r| PolicySpec::Sha { r }));
    specs.extend(LCE_SWEEP.iter().map(|&rho| PolicySpec::Lce { rho }));

    let mut tables = Vec::new();
    for stability in [0.95, 0.3] {
        let bench = generate_synthetic(&SyntheticSpec {
            rank_stability: stability,
            ..SyntheticSpec::default()
        })?;
        let engine = RoberEngine::new(EngineConfig::default())?;
        let mut cells = Vec::new();
        for &spec in &specs {
            let points: Vec<_> = (0..10)
                .map(|seed| run(&bench, &RunConfig::new(spec, seed), Some(&engine)).map(|t| t.objective()))
                .collect::<Result<_, _>>()?;
            cells.push(MethodCell::from_points(spec.kind().label(), spec.parameter(), &points)?);
        }
        let reference = reference_point(&cells)?;
        let mut per_method: BTreeMap<String, Vec<Point2>> = BTreeMap::new();
        for c in &cells {
            per_method.entry(c.method.clone()).or_default().push(c.mean_point());
        }
        let all: Vec<Point2> = cells.iter().map(MethodCell::mean_point).collect();
        let front = pareto_front(&all);
        println!("rank stability {stability}: union front");
        for p in front.points() {
            let c = cells.iter().find(|c| c.mean_point() == *p).expect("front point comes from a cell");
            println!("  {:<8} {:>6}  y_L {:.5}  y_I {:>7.0}", c.method, c.parameter, p.y_l, p.y_i);
        }
        let rel = relative_hvi(&per_method, reference)?;
        println!("  relative HVI {:?}", rel.scores);
        tables.push(rel.scores);
    }
    println!("average rank {:?}", average_rank(&tables)?);
    Ok(())
}
