//! Classification metrics: confusion matrix, accuracy, F1, and rank-based
//! AUC (Mann–Whitney with ties counted one half).

use super::LearnError;

/// Raw confusion counts for the binary task (positive class = 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize)]
pub struct ConfusionMatrix {
    pub true_positive: u64,
    pub false_negative: u64,
    pub false_positive: u64,
    pub true_negative: u64,
}

impl ConfusionMatrix {
    pub fn total(&self) -> u64 {
        self.true_positive + self.false_negative + self.false_positive + self.true_negative
    }

    /// Rows normalized to percentages: `[actual positive, actual negative]`
    /// by `[predicted positive, predicted negative]`. Each row sums to 100
    /// (up to rounding) when the actual class is populated.
    pub fn row_percentages(&self) -> [[f64; 2]; 2] {
        let row = |a: u64, b: u64| {
            let total = (a + b) as f64;
            if total == 0.0 {
                [0.0, 0.0]
            } else {
                [100.0 * a as f64 / total, 100.0 * b as f64 / total]
            }
        };
        [
            row(self.true_positive, self.false_negative),
            row(self.false_positive, self.true_negative),
        ]
    }
}

/// One evaluation's metrics. All values are fractions in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsReport {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub auc: f64,
    pub confusion: ConfusionMatrix,
    pub n: usize,
}

/// AUC as the Mann–Whitney statistic: the fraction of (positive, negative)
/// pairs ranked correctly by score, ties counting one half. Computed via
/// average ranks in `O(n log n)`.
pub fn auc(labels: &[u8], scores: &[f64]) -> Result<f64, LearnError> {
    if labels.is_empty() {
        return Err(LearnError::EmptyInput);
    }
    if labels.len() != scores.len() {
        return Err(LearnError::InvalidData(format!(
            "{} labels vs {} scores",
            labels.len(),
            scores.len()
        )));
    }
    let n_pos = labels.iter().filter(|&&l| l == 1).count() as f64;
    let n_neg = labels.len() as f64 - n_pos;
    if n_pos == 0.0 || n_neg == 0.0 {
        return Err(LearnError::DegenerateData(
            "AUC needs both classes present".into(),
        ));
    }
    let mut order: Vec<usize> = (0..labels.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    // Average ranks over tied score runs (1-based ranks).
    let mut rank_sum_pos = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        let avg_rank = (i + 1 + j + 1) as f64 / 2.0;
        for &idx in &order[i..=j] {
            if labels[idx] == 1 {
                rank_sum_pos += avg_rank;
            }
        }
        i = j + 1;
    }
    Ok((rank_sum_pos - n_pos * (n_pos + 1.0) / 2.0) / (n_pos * n_neg))
}

/// Computes accuracy, positive-class precision/recall/F1, AUC, and the
/// confusion matrix. Degenerate precision/recall denominators yield 0.
pub fn compute_metrics(
    labels: &[u8],
    predictions: &[u8],
    scores: &[f64],
) -> Result<MetricsReport, LearnError> {
    if labels.is_empty() {
        return Err(LearnError::EmptyInput);
    }
    if labels.len() != predictions.len() || labels.len() != scores.len() {
        return Err(LearnError::InvalidData(
            "labels, predictions, and scores must have equal lengths".into(),
        ));
    }
    let mut confusion = ConfusionMatrix::default();
    for (&label, &pred) in labels.iter().zip(predictions) {
        match (label, pred) {
            (1, 1) => confusion.true_positive += 1,
            (1, 0) => confusion.false_negative += 1,
            (0, 1) => confusion.false_positive += 1,
            (0, 0) => confusion.true_negative += 1,
            _ => return Err(LearnError::InvalidData("labels must be 0 or 1".into())),
        }
    }
    let n = labels.len();
    let accuracy = (confusion.true_positive + confusion.true_negative) as f64 / n as f64;
    let predicted_pos = confusion.true_positive + confusion.false_positive;
    let actual_pos = confusion.true_positive + confusion.false_negative;
    let precision = if predicted_pos == 0 {
        0.0
    } else {
        confusion.true_positive as f64 / predicted_pos as f64
    };
    let recall = if actual_pos == 0 {
        0.0
    } else {
        confusion.true_positive as f64 / actual_pos as f64
    };
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    Ok(MetricsReport {
        accuracy,
        precision,
        recall,
        f1,
        auc: auc(labels, scores)?,
        confusion,
        n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force pairwise Mann–Whitney oracle with ties counted one half.
    pub(crate) fn auc_oracle(labels: &[u8], scores: &[f64]) -> f64 {
        let mut wins = 0.0;
        let mut pairs = 0.0;
        for (i, &li) in labels.iter().enumerate() {
            if li != 1 {
                continue;
            }
            for (j, &lj) in labels.iter().enumerate() {
                if lj != 0 {
                    continue;
                }
                pairs += 1.0;
                if scores[i] > scores[j] {
                    wins += 1.0;
                } else if scores[i] == scores[j] {
                    wins += 0.5;
                }
            }
        }
        wins / pairs
    }

    #[test]
    fn perfect_and_reversed() {
        let labels = [0, 0, 1, 1];
        assert_eq!(auc(&labels, &[0.1, 0.2, 0.8, 0.9]).unwrap(), 1.0);
        assert_eq!(auc(&labels, &[0.9, 0.8, 0.2, 0.1]).unwrap(), 0.0);
        let all_tied = auc(&labels, &[0.5, 0.5, 0.5, 0.5]).unwrap();
        assert_eq!(all_tied, 0.5);
    }

    #[test]
    fn textbook_case() {
        let labels = [0, 0, 1, 1];
        let scores = [0.1, 0.4, 0.35, 0.8];
        assert!((auc(&labels, &scores).unwrap() - 0.75).abs() < 1e-12);
    }

    #[test]
    fn matches_pairwise_oracle_with_heavy_ties() {
        // Deterministic pseudo-random scores from a small value set to force
        // many ties, including cross-class ties.
        let mut labels = Vec::new();
        let mut scores = Vec::new();
        let mut state = 12345u64;
        for i in 0..60 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            labels.push(u8::from(i % 3 == 0));
            scores.push(((state >> 33) % 7) as f64 / 7.0);
        }
        let fast = auc(&labels, &scores).unwrap();
        let slow = auc_oracle(&labels, &scores);
        assert!((fast - slow).abs() < 1e-9, "{fast} vs {slow}");
    }

    #[test]
    fn ten_prediction_hand_case() {
        // 6 TP, 1 FN, 2 TN, 1 FP.
        let labels = [1, 1, 1, 1, 1, 1, 1, 0, 0, 0];
        let predictions = [1, 1, 1, 1, 1, 1, 0, 0, 0, 1];
        let scores = [0.9, 0.9, 0.8, 0.8, 0.7, 0.7, 0.4, 0.3, 0.2, 0.6];
        let report = compute_metrics(&labels, &predictions, &scores).unwrap();
        assert_eq!(report.accuracy, 0.8);
        assert!((report.precision - 6.0 / 7.0).abs() < 1e-12);
        assert!((report.recall - 6.0 / 7.0).abs() < 1e-12);
        assert!((report.f1 - 6.0 / 7.0).abs() < 1e-12);
        assert_eq!(report.confusion.true_positive, 6);
        assert_eq!(report.confusion.false_negative, 1);
        assert_eq!(report.confusion.false_positive, 1);
        assert_eq!(report.confusion.true_negative, 2);
        let rows = report.confusion.row_percentages();
        for row in rows {
            assert!((row[0] + row[1] - 100.0).abs() < 1e-6);
        }
    }

    #[test]
    fn empty_and_degenerate_inputs() {
        assert!(matches!(auc(&[], &[]), Err(LearnError::EmptyInput)));
        assert!(matches!(
            auc(&[1, 1], &[0.1, 0.2]),
            Err(LearnError::DegenerateData(_))
        ));
        assert!(matches!(
            compute_metrics(&[], &[], &[]),
            Err(LearnError::EmptyInput)
        ));
    }

    #[test]
    fn metric_bounds() {
        let labels = [1, 0, 1, 0, 1];
        let predictions = [0, 0, 1, 1, 1];
        let scores = [0.2, 0.3, 0.8, 0.6, 0.7];
        let r = compute_metrics(&labels, &predictions, &scores).unwrap();
        for v in [r.accuracy, r.precision, r.recall, r.f1, r.auc] {
            assert!((0.0..=1.0).contains(&v));
        }
        assert_eq!(r.confusion.total() as usize, r.n);
    }
}
