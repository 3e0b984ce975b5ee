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


//! The whole pipeline as the command-line tool runs it: generate a benchmark,
//! simulate an experiment grid (resumable), and analyze the results into
//! report tables.
//!
//! ```text
//! cargo run --release --example experiment_pipeline -- [workdir]
//! ```

use std::fs;
use std::path::PathBuf;

use lcdiscard::curves::{canonical_export, generate_synthetic, SyntheticSpec};
use lcdiscard::experiment::{self, table::read_table, ExperimentGrid};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tmp = tempfile::tempdir()?;
    let work = std::env::args().nth(1).map_or_else(|| tmp.path().to_path_buf(), PathBuf::from);
    fs::create_dir_all(&work)?;

    for (name, stability) in [("stable", 0.95), ("crossing", 0.3)] {
        let spec = SyntheticSpec {
            name: name.into(),
            rank_stability: stability,
            ..SyntheticSpec::default()
        };
        canonical_export(&generate_synthetic(&spec)?, &work.join(format!("{name}.csv")))?;
    }
    let grid_text = r#"
out = "results"
seeds = [0, 1, 2, 3, 4]
benchmarks = [{ path = "stable.csv" }, { path = "crossing.csv" }]
policies = [
  { kind = "iepoch", values = [1, 2, 5, 10, 25, 100] },
  { kind = "sha", values = [1.41, 2.0, 4.0, 16.0] },
  { kind = "lce", values = [0.5, 0.9] },
]
"#;
    fs::write(work.join("grid.toml"), grid_text)?;
    let grid = ExperimentGrid::from_file(&work.join("grid.toml"))?;

    let report = experiment::simulate(&grid, true)?;
    println!("{} cells: {} computed, {} skipped", report.total, report.computed, report.skipped);
    let resumed = experiment::simulate(&grid, true)?;
    println!("resumed: {} computed, {} skipped", resumed.computed, resumed.skipped);

    let out = work.join("report");
    let summary = experiment::analyze(&grid.out, &out)?;
    println!("analyzed {} summaries into {} files", summary.summaries, summary.files.len());
    for name in ["relative_hvi.csv", "average_rank.csv"] {
        let table = read_table(&out.join(name))?;
        println!("\n{name}\n  {}", table.header.join("  "));
        for row in table.rows {
            println!("  {}", row.join("  "));
        }
    }
    Ok(())
}
