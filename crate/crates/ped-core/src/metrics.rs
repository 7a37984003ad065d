//! Evaluation measures: accuracy, rank AUC (binary and macro one-vs-rest),
//! confusion matrices, and the energy distance between point sets.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{PedError, Result};

/// Evaluation summary for one model on one test set.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalReport {
    pub accuracy: f64,
    pub auc: f64,
    pub confusion: Vec<Vec<u64>>,
    pub n_test: usize,
}

impl EvalReport {
    /// Fixed-column CSV form: `accuracy,auc,n_test`.
    pub fn csv_header() -> &'static str {
        "accuracy,auc,n_test"
    }

    pub fn to_csv_row(&self) -> String {
        format!("{},{},{}", self.accuracy, self.auc, self.n_test)
    }
}

/// Fraction of exact matches.
pub fn accuracy(pred: &[u32], truth: &[u32]) -> Result<f64> {
    if pred.len() != truth.len() {
        return Err(PedError::LengthMismatch {
            left: pred.len(),
            right: truth.len(),
        });
    }
    if pred.is_empty() {
        return Err(PedError::EmptyInput("accuracy of empty vectors".into()));
    }
    let hits = pred.iter().zip(truth).filter(|(a, b)| a == b).count();
    Ok(hits as f64 / pred.len() as f64)
}

/// Confusion matrix with rows indexed by truth and columns by prediction.
pub fn confusion_matrix(pred: &[u32], truth: &[u32], n_classes: usize) -> Result<Vec<Vec<u64>>> {
    if pred.len() != truth.len() {
        return Err(PedError::LengthMismatch {
            left: pred.len(),
            right: truth.len(),
        });
    }
    let mut m = vec![vec![0u64; n_classes]; n_classes];
    for (&p, &t) in pred.iter().zip(truth) {
        m[t as usize][p as usize] += 1;
    }
    Ok(m)
}

/// Mann-Whitney rank AUC with midrank tie handling. `truth` must contain
/// both 0 and 1.
pub fn auc_binary(scores: &[f64], truth: &[u32]) -> Result<f64> {
    if scores.len() != truth.len() {
        return Err(PedError::LengthMismatch {
            left: scores.len(),
            right: truth.len(),
        });
    }
    let n_pos = truth.iter().filter(|&&t| t == 1).count();
    let n_neg = truth.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(PedError::SingleClassTruth);
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));

    let mut rank_sum_pos = 0.0f64;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        // Midrank of the tied block spanning ranks i+1 ..= j+1.
        let midrank = (i + 1 + j + 1) as f64 / 2.0;
        for &idx in &order[i..=j] {
            if truth[idx] == 1 {
                rank_sum_pos += midrank;
            }
        }
        i = j + 1;
    }
    let u = rank_sum_pos - (n_pos * (n_pos + 1)) as f64 / 2.0;
    Ok(u / (n_pos as f64 * n_neg as f64))
}

/// Unweighted mean of one-vs-rest binary AUCs. Every class in `0..K` must
/// appear in `truth`.
pub fn auc_multiclass(proba: &[Vec<f64>], truth: &[u32]) -> Result<f64> {
    if proba.len() != truth.len() {
        return Err(PedError::LengthMismatch {
            left: proba.len(),
            right: truth.len(),
        });
    }
    if proba.is_empty() {
        return Err(PedError::EmptyInput("auc of empty input".into()));
    }
    let k = proba[0].len();
    let mut total = 0.0;
    for class in 0..k {
        if !truth.iter().any(|&t| t as usize == class) {
            return Err(PedError::MissingClass { class });
        }
        let scores: Vec<f64> = proba.iter().map(|row| row[class]).collect();
        let labels: Vec<u32> = truth.iter().map(|&t| u32::from(t as usize == class)).collect();
        total += auc_binary(&scores, &labels)?;
    }
    Ok(total / k as f64)
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn mean_cross_distance(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let sums: Vec<f64> = a
        .par_iter()
        .map(|x| b.iter().map(|y| euclidean(x, y)).sum::<f64>())
        .collect();
    sums.iter().sum::<f64>() / (a.len() as f64 * b.len() as f64)
}

fn mean_self_distance(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    if n < 2 {
        return 0.0;
    }
    let sums: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| (i + 1..n).map(|j| euclidean(&a[i], &a[j])).sum::<f64>())
        .collect();
    // V-statistic over all ordered pairs, zero diagonal included.
    2.0 * sums.iter().sum::<f64>() / (n as f64 * n as f64)
}

/// Energy distance 2 E|A-B| - E|A-A'| - E|B-B'| over all pairs; nonnegative,
/// zero for identical multisets.
pub fn energy_distance(sample_a: &[Vec<f64>], sample_b: &[Vec<f64>]) -> Result<f64> {
    if sample_a.is_empty() || sample_b.is_empty() {
        return Err(PedError::EmptyInput("energy distance of empty set".into()));
    }
    let d = sample_a[0].len();
    for x in sample_a.iter().chain(sample_b) {
        if x.len() != d {
            return Err(PedError::DimensionMismatch {
                left: d,
                right: x.len(),
            });
        }
    }
    Ok(2.0 * mean_cross_distance(sample_a, sample_b)
        - mean_self_distance(sample_a)
        - mean_self_distance(sample_b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accuracy_counts_matches() {
        assert_eq!(accuracy(&[0, 1, 0, 1], &[0, 1, 0, 1]).unwrap(), 1.0);
        assert_eq!(accuracy(&[0, 1, 1, 1], &[0, 1, 0, 1]).unwrap(), 0.75);
        assert_eq!(accuracy(&[2, 2], &[1, 1]).unwrap(), 0.0);
    }

    #[test]
    fn accuracy_length_mismatch_errors() {
        assert!(matches!(
            accuracy(&[0], &[0, 1]),
            Err(PedError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn auc_perfect_separation_is_one() {
        let auc = auc_binary(&[0.1, 0.2, 0.8, 0.9], &[0, 0, 1, 1]).unwrap();
        assert_eq!(auc, 1.0);
    }

    #[test]
    fn auc_constant_scores_is_half() {
        let auc = auc_binary(&[0.5, 0.5, 0.5, 0.5], &[0, 1, 0, 1]).unwrap();
        assert_eq!(auc, 0.5);
    }

    #[test]
    fn auc_hand_example() {
        let auc = auc_binary(&[0.1, 0.4, 0.35, 0.8], &[0, 0, 1, 1]).unwrap();
        assert_eq!(auc, 0.75);
    }

    #[test]
    fn auc_single_class_errors() {
        assert!(matches!(
            auc_binary(&[0.5, 0.7], &[1, 1]),
            Err(PedError::SingleClassTruth)
        ));
    }

    #[test]
    fn multiclass_one_hot_correct_is_one() {
        let proba = vec![
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ];
        assert_eq!(auc_multiclass(&proba, &[0, 1, 2]).unwrap(), 1.0);
    }

    #[test]
    fn multiclass_uniform_probs_is_half() {
        let proba = vec![vec![1.0 / 3.0; 3]; 6];
        assert_eq!(auc_multiclass(&proba, &[0, 0, 1, 1, 2, 2]).unwrap(), 0.5);
    }

    #[test]
    fn multiclass_two_classes_equals_binary() {
        let scores = [0.2, 0.9, 0.4, 0.7];
        let truth = [0u32, 1, 1, 0];
        let proba: Vec<Vec<f64>> = scores.iter().map(|&s| vec![1.0 - s, s]).collect();
        let a = auc_multiclass(&proba, &truth).unwrap();
        let b = auc_binary(&scores, &truth).unwrap();
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn multiclass_missing_class_errors() {
        let proba = vec![vec![0.5, 0.3, 0.2]; 4];
        assert!(matches!(
            auc_multiclass(&proba, &[0, 0, 1, 1]),
            Err(PedError::MissingClass { class: 2 })
        ));
    }

    #[test]
    fn energy_identical_sets_is_zero() {
        let a = vec![vec![1.0, 2.0], vec![-1.0, 0.5], vec![0.0, 0.0]];
        let d = energy_distance(&a, &a).unwrap();
        assert!(d.abs() < 1e-12, "distance {d}");
    }

    #[test]
    fn energy_is_symmetric() {
        let a = vec![vec![0.0], vec![1.0], vec![2.0]];
        let b = vec![vec![5.0], vec![6.0]];
        let ab = energy_distance(&a, &b).unwrap();
        let ba = energy_distance(&b, &a).unwrap();
        assert!((ab - ba).abs() < 1e-12);
        assert!(ab > 0.0);
    }

    #[test]
    fn energy_two_singletons_is_twice_distance() {
        let a = vec![vec![0.0, 0.0]];
        let b = vec![vec![3.0, 4.0]];
        assert_eq!(energy_distance(&a, &b).unwrap(), 10.0);
    }

    #[test]
    fn energy_dimension_mismatch_errors() {
        let a = vec![vec![0.0, 0.0]];
        let b = vec![vec![1.0]];
        assert!(matches!(
            energy_distance(&a, &b),
            Err(PedError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn confusion_marginals_match_class_counts() {
        let pred = [0u32, 1, 1, 2, 2, 0];
        let truth = [0u32, 1, 2, 2, 1, 0];
        let m = confusion_matrix(&pred, &truth, 3).unwrap();
        let total: u64 = m.iter().flatten().sum();
        assert_eq!(total, 6);
        for k in 0..3 {
            let row_sum: u64 = m[k].iter().sum();
            let truth_count = truth.iter().filter(|&&t| t as usize == k).count() as u64;
            assert_eq!(row_sum, truth_count);
            let col_sum: u64 = m.iter().map(|r| r[k]).sum();
            let pred_count = pred.iter().filter(|&&p| p as usize == k).count() as u64;
            assert_eq!(col_sum, pred_count);
        }
    }
}
