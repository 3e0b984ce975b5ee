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


//! Generalization-error metrics: R2 for regression, prediction advantage for
//! classification, and the `1 - R2` objective.
//!
//! ```text
//! cargo run --example metrics
//! ```

use lcdiscard::metrics::{
    r2_classification, r2_from_confusion, r2_regression, to_generalization_error, PredictionBatch,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let targets = vec![3.0, -0.5, 2.0, 7.0];
    let predictions = vec![2.5, 0.0, 2.0, 8.0];
    let r2 = r2_regression(&PredictionBatch::new(targets, predictions)?)?;
    println!("regression R2 = {r2:.4}, y_L = {:.4}", to_generalization_error(r2).value());

    let labels = vec!["cat", "cat", "cat", "dog", "dog", "bird"];
    let guesses = vec!["cat", "cat", "dog", "dog", "cat", "bird"];
    let pa = r2_classification(&PredictionBatch::new(labels.clone(), guesses)?)?;
    println!("prediction advantage = {pa:.4}");

    // constant mode predictor scores exactly zero
    let mode_only = vec!["cat"; labels.len()];
    println!("mode predictor = {}", r2_classification(&PredictionBatch::new(labels, mode_only)?)?);

    // the same quantity from a stored confusion matrix (rows = truth)
    let confusion = vec![vec![40, 5, 5], vec![10, 25, 5], vec![5, 5, 0]];
    let from_matrix = r2_from_confusion(&confusion)?;
    let err = to_generalization_error(from_matrix);
    println!(
        "confusion-matrix advantage = {from_matrix:.4}, y_L = {:.4}, worse than constant: {}",
        err.value(),
        err.is_worse_than_constant()
    );
    Ok(())
}
