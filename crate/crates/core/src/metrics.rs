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

//! Generalized coefficient of determination.
//!
//! Regression uses the classic `1 - SS_res / SS_tot`. Classification swaps the
//! squared loss for the 0-1 loss and the mean for the marginal mode, which
//! yields the prediction advantage. Both put the constant predictor at 0 and a
//! perfect model at 1, so curves from either task kind live on one scale once
//! converted with [`to_generalization_error`].

use std::collections::BTreeMap;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("targets and predictions differ in length ({targets} vs {predictions})")]
    LengthMismatch { targets: usize, predictions: usize },
    #[error("batch is empty")]
    Empty,
    #[error("regression needs at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error("targets have zero variance; R2 is undefined")]
    DegenerateVariance,
    #[error("targets contain a single class; the mode predictor has zero loss")]
    SingleClass,
    #[error("invalid aggregate: {0}")]
    InvalidAggregate(String),
}

pub type Result<T> = std::result::Result<T, MetricsError>;

/// Paired targets and predictions of the same kind.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionBatch<T> {
    targets: Vec<T>,
    predictions: Vec<T>,
}

impl<T> PredictionBatch<T> {
    pub fn new(targets: Vec<T>, predictions: Vec<T>) -> Result<Self> {
        if targets.len() != predictions.len() {
            return Err(MetricsError::LengthMismatch {
                targets: targets.len(),
                predictions: predictions.len(),
            });
        }
        if targets.is_empty() {
            return Err(MetricsError::Empty);
        }
        Ok(Self {
            targets,
            predictions,
        })
    }

    pub fn targets(&self) -> &[T] {
        &self.targets
    }

    pub fn predictions(&self) -> &[T] {
        &self.predictions
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }
}

/// `1 - R2`, lower is better. Values above 1 are worse than the constant
/// predictor.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct GeneralizationError(pub f64);

impl GeneralizationError {
    pub fn value(self) -> f64 {
        self.0
    }

    pub fn r2(self) -> f64 {
        1.0 - self.0
    }

    pub fn is_worse_than_constant(self) -> bool {
        self.0 > 1.0
    }
}

pub fn to_generalization_error(r2: f64) -> GeneralizationError {
    GeneralizationError(1.0 - r2)
}

pub fn r2_regression(batch: &PredictionBatch<f64>) -> Result<f64> {
    let n = batch.len();
    if n < 2 {
        return Err(MetricsError::TooFewSamples(n));
    }
    let mean = batch.targets.iter().sum::<f64>() / n as f64;
    let ss_tot: f64 = batch.targets.iter().map(|y| (y - mean).powi(2)).sum();
    let ss_res: f64 = batch
        .targets
        .iter()
        .zip(&batch.predictions)
        .map(|(y, p)| (y - p).powi(2))
        .sum();
    r2_from_sums(ss_res, ss_tot)
}

/// R2 from pre-aggregated residual and total sums of squares.
pub fn r2_from_sums(ss_res: f64, ss_tot: f64) -> Result<f64> {
    if !(ss_res.is_finite() && ss_tot.is_finite()) || ss_res < 0.0 || ss_tot < 0.0 {
        return Err(MetricsError::InvalidAggregate(format!(
            "ss_res={ss_res}, ss_tot={ss_tot}"
        )));
    }
    if ss_tot == 0.0 {
        return Err(MetricsError::DegenerateVariance);
    }
    Ok(1.0 - ss_res / ss_tot)
}

/// Marginal mode of `labels`. Ties go to the smallest label.
pub fn marginal_mode<L: Ord + Clone>(labels: &[L]) -> Option<L> {
    let mut counts: BTreeMap<&L, usize> = BTreeMap::new();
    for label in labels {
        *counts.entry(label).or_default() += 1;
    }
    let best = *counts.values().max()?;
    let mut tied = counts.iter().filter(|(_, &c)| c == best).map(|(l, _)| *l);
    let mode = tied.next().cloned();
    if tied.next().is_some() {
        log::debug!("mode tie among {} labels, taking the first in sort order", counts.len());
    }
    mode
}

/// Prediction advantage: the classification analogue of R2.
pub fn r2_classification<L: Ord + Clone>(batch: &PredictionBatch<L>) -> Result<f64> {
    let mode = marginal_mode(&batch.targets).ok_or(MetricsError::Empty)?;
    let errors = batch
        .targets
        .iter()
        .zip(&batch.predictions)
        .filter(|(y, p)| y != p)
        .count();
    let mode_errors = batch.targets.iter().filter(|y| **y != mode).count();
    r2_from_error_counts(errors as u64, mode_errors as u64, batch.len() as u64)
}

/// Prediction advantage from pre-aggregated 0-1 error counts, e.g. read off a
/// confusion matrix.
pub fn r2_from_error_counts(errors: u64, mode_errors: u64, n: u64) -> Result<f64> {
    if n == 0 {
        return Err(MetricsError::Empty);
    }
    if errors > n || mode_errors > n {
        return Err(MetricsError::InvalidAggregate(format!(
            "errors={errors}, mode_errors={mode_errors}, n={n}"
        )));
    }
    if mode_errors == 0 {
        return Err(MetricsError::SingleClass);
    }
    let loss = errors as f64 / n as f64;
    let mode_loss = mode_errors as f64 / n as f64;
    Ok(1.0 - loss / mode_loss)
}

/// Prediction advantage from a square confusion matrix, `rows = true class`.
pub fn r2_from_confusion(matrix: &[Vec<u64>]) -> Result<f64> {
    let k = matrix.len();
    if matrix.iter().any(|row| row.len() != k) {
        return Err(MetricsError::InvalidAggregate("confusion matrix is not square".into()));
    }
    let n: u64 = matrix.iter().flatten().sum();
    let correct: u64 = (0..k).map(|i| matrix[i][i]).sum();
    let class_totals: Vec<u64> = matrix.iter().map(|row| row.iter().sum()).collect();
    let mode_count = class_totals.iter().copied().max().unwrap_or(0);
    r2_from_error_counts(n - correct, n - mode_count, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reg(y: &[f64], p: &[f64]) -> f64 {
        r2_regression(&PredictionBatch::new(y.to_vec(), p.to_vec()).unwrap()).unwrap()
    }

    fn cls(y: &str, p: &str) -> Result<f64> {
        let batch = PredictionBatch::new(y.chars().collect(), p.chars().collect())?;
        r2_classification(&batch)
    }

    #[test]
    fn regression_examples() {
        assert_eq!(reg(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]), 1.0);
        assert_eq!(reg(&[1.0, 2.0, 3.0], &[2.0, 2.0, 2.0]), 0.0);
        assert_eq!(reg(&[1.0, 2.0, 3.0], &[1.0, 2.0, 2.0]), 0.5);
    }

    #[test]
    fn regression_degenerate() {
        let batch = PredictionBatch::new(vec![2.0, 2.0], vec![1.0, 3.0]).unwrap();
        assert_eq!(r2_regression(&batch), Err(MetricsError::DegenerateVariance));
        let batch = PredictionBatch::new(vec![2.0], vec![1.0]).unwrap();
        assert_eq!(r2_regression(&batch), Err(MetricsError::TooFewSamples(1)));
    }

    #[test]
    fn batch_validation() {
        assert!(matches!(
            PredictionBatch::new(vec![1.0], vec![1.0, 2.0]),
            Err(MetricsError::LengthMismatch { .. })
        ));
        assert_eq!(
            PredictionBatch::<f64>::new(vec![], vec![]),
            Err(MetricsError::Empty)
        );
    }

    #[test]
    fn classification_examples() {
        assert_eq!(cls("AAB", "AAB").unwrap(), 1.0);
        assert_eq!(cls("AAB", "AAA").unwrap(), 0.0);
        // one mismatch against one for the mode predictor
        assert_eq!(cls("AAAB", "AABB").unwrap(), 0.0);
        // two mismatches against one
        assert_eq!(cls("AAAB", "ABBB").unwrap(), -1.0);
        assert_eq!(cls("AAA", "AAB"), Err(MetricsError::SingleClass));
    }

    #[test]
    fn mode_ties_take_first_label() {
        assert_eq!(marginal_mode(&['B', 'A', 'B', 'A']), Some('A'));
        // with mode A the constant prediction scores zero
        assert_eq!(cls("BABA", "AAAA").unwrap(), 0.0);
    }

    #[test]
    fn confusion_matches_raw() {
        // true A: 3 (2 right), true B: 1 (1 right)
        let m = vec![vec![2, 1], vec![0, 1]];
        assert_eq!(r2_from_confusion(&m).unwrap(), cls("AAAB", "AABB").unwrap());
    }

    #[test]
    fn generalization_error_mapping() {
        assert_eq!(to_generalization_error(1.0).value(), 0.0);
        assert_eq!(to_generalization_error(0.0).value(), 1.0);
        assert_eq!(to_generalization_error(0.25).value(), 0.75);
        assert!(to_generalization_error(-0.2).is_worse_than_constant());
    }
}
