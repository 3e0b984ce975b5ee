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

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lcdiscard::experiment::{self, exit_code, ExperimentError, ExperimentGrid};

#[derive(Parser)]
#[command(name = "lcdiscard", version, about = "Early-discarding HPO replay simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic benchmark from a TOML spec.
    Generate {
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Convert an external curve table into the canonical format.
    Ingest {
        input: PathBuf,
        /// Stored metric: `canonical` (1 - R2) or `r2`.
        #[arg(long, default_value = "canonical")]
        schema: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run every cell of an experiment grid.
    Simulate {
        grid: PathBuf,
        /// Comma-separated seeds overriding the grid's list.
        #[arg(long, value_delimiter = ',')]
        seed_list: Option<Vec<u64>>,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Skip cells whose outputs already match their configuration.
        #[arg(long, overrides_with = "no_resume")]
        resume: bool,
        #[arg(long)]
        no_resume: bool,
    },
    /// Aggregate simulation results into report tables.
    Analyze {
        results: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn execute(command: Command) -> Result<i32, ExperimentError> {
    match command {
        Command::Generate { spec, out } => {
            let s = experiment::generate(&spec, &out)?;
            println!(
                "wrote {} ({} curves, i_max {}, worse-than-constant fraction {:.4}, epoch-1/final spearman {:.4})",
                out.display(),
                s.curves,
                s.i_max,
                s.worse_than_constant_fraction,
                s.first_final_spearman
            );
        }
        Command::Ingest { input, schema, out } => {
            let report = experiment::ingest(&input, &schema, &out)?;
            println!("wrote {}: {report}", out.display());
        }
        Command::Simulate {
            grid,
            seed_list,
            jobs,
            out,
            resume: _,
            no_resume,
        } => {
            let mut config = ExperimentGrid::from_file(&grid)?;
            if let Some(seeds) = seed_list {
                config.seeds = seeds;
            }
            if let Some(jobs) = jobs {
                config.jobs = Some(jobs);
            }
            if let Some(out) = out {
                config.out = out;
            }
            config.validate()?;
            let report = experiment::simulate(&config, !no_resume)?;
            println!(
                "{} cells: {} computed, {} skipped, {} failed",
                report.total,
                report.computed,
                report.skipped,
                report.failures.len()
            );
            if !report.failures.is_empty() {
                for f in &report.failures {
                    eprintln!("failed {}: {}", f.cell, f.message);
                }
                return Ok(exit_code::PARTIAL_FAILURE);
            }
        }
        Command::Analyze { results, out } => {
            let s = experiment::analyze(&results, &out)?;
            println!(
                "{} summaries, {} settings, {} benchmarks -> {} files in {}",
                s.summaries,
                s.cells,
                s.benchmarks,
                s.files.len(),
                out.display()
            );
        }
    }
    Ok(exit_code::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { exit_code::USAGE } else { exit_code::SUCCESS };
            return ExitCode::from(code as u8);
        }
    };
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
