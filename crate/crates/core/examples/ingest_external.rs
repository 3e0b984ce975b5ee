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


//! Bringing external learning curves in: a file storing R2 scores with a few
//! broken candidates is filtered, converted to `1 - R2` and rewritten in the
//! canonical format.
//!
//! ```text
//! cargo run --example ingest_external
//! ```

use std::fmt::Write as _;

use lcdiscard::curves::{canonical_export, load_benchmark, Schema};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let raw = dir.path().join("scores.csv");
    let mut text = String::from("# name: external\n# task_kind: classification\n");
    text.push_str("candidate_id,epoch,train_r2,valid_r2,test_r2\n");
    for c in 0..20 {
        for e in 1..=30 {
            let r2 = 0.9 - 0.8 / (1.0 + e as f64 * (1.0 + c as f64 * 0.1));
            // candidates 3 and 11 diverged and logged nan
            let valid = if (c == 3 || c == 11) && e > 20 { "nan".to_string() } else { format!("{r2:.6}") };
            writeln!(text, "net-{c},{e},{:.6},{valid},{:.6}", r2 + 0.05, r2 - 0.01)?;
        }
    }
    // one run that never finished
    for e in 1..=12 {
        writeln!(text, "net-20,{e},0.5,0.5,0.5")?;
    }
    std::fs::write(&raw, text)?;

    let (bench, report) = load_benchmark(&raw, Schema::R2)?;
    println!("{report}");
    println!("{} ({:?}): {} curves x {} epochs", bench.name(), bench.task_kind(), bench.len(), bench.i_max());
    let c = &bench.curves()[0];
    println!("{}: stored R2 at epoch 30 became error {:.6}", c.candidate_id, c.valid_at(30));

    let canonical = dir.path().join("external.csv");
    canonical_export(&bench, &canonical)?;
    let (again, _) = load_benchmark(&canonical, Schema::Canonical)?;
    println!("canonical round trip identical: {}", again == bench);
    Ok(())
}
