//! Train/test splitting, stratified cross-validation, and the tiered
//! feature-set evaluation protocol.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::adaboost::{AdaBoostModel, AdaBoostParams};
use super::dataset::Dataset;
use super::metrics::{compute_metrics, ConfusionMatrix, MetricsReport};
use super::sampling::balanced_samples;
use super::LearnError;

/// Derives a sub-seed for an internal stage, keeping every stage a pure
/// function of the run seed.
pub(crate) fn derive_seed(seed: u64, tag: u64) -> u64 {
    seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Stratified train/test split. Per class, `ratio` of the rows (rounded)
/// go to the training side; the split is deterministic under the seed.
pub fn split_train_test(
    data: &Dataset,
    ratio: f64,
    seed: u64,
) -> Result<(Dataset, Dataset), LearnError> {
    if !(0.0..=1.0).contains(&ratio) {
        return Err(LearnError::InvalidData(format!("split ratio {ratio}")));
    }
    if data.n_rows() == 0 {
        return Err(LearnError::EmptyInput);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train_rows = Vec::new();
    let mut test_rows = Vec::new();
    for class in [1u8, 0u8] {
        let mut rows = data.rows_with_label(class);
        rows.shuffle(&mut rng);
        let take = (ratio * rows.len() as f64).round() as usize;
        train_rows.extend_from_slice(&rows[..take]);
        test_rows.extend_from_slice(&rows[take..]);
    }
    // Stable row order inside each side keeps downstream output deterministic.
    train_rows.sort_unstable();
    test_rows.sort_unstable();
    Ok((data.select_rows(&train_rows), data.select_rows(&test_rows)))
}

/// Mean and population standard deviation of one metric across runs.
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
}

impl MeanStd {
    pub fn of(values: &[f64]) -> MeanStd {
        if values.is_empty() {
            return MeanStd::default();
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        MeanStd {
            mean,
            std: var.sqrt(),
        }
    }
}

/// Aggregated F1/accuracy/AUC over several evaluations.
#[derive(Debug, Clone, Copy, PartialEq, Default, serde::Serialize)]
pub struct MetricAggregate {
    pub f1: MeanStd,
    pub accuracy: MeanStd,
    pub auc: MeanStd,
}

impl MetricAggregate {
    pub fn of(reports: &[MetricsReport]) -> MetricAggregate {
        let collect = |f: fn(&MetricsReport) -> f64| {
            let values: Vec<f64> = reports.iter().map(f).collect();
            MeanStd::of(&values)
        };
        MetricAggregate {
            f1: collect(|r| r.f1),
            accuracy: collect(|r| r.accuracy),
            auc: collect(|r| r.auc),
        }
    }
}

/// Per-fold metrics plus their aggregate.
#[derive(Debug, Clone)]
pub struct CvReport {
    pub per_fold: Vec<MetricsReport>,
    pub summary: MetricAggregate,
}

/// Stratified k-fold cross-validation: each row lands in exactly one
/// validation fold, folds preserve class balance up to one row, and every
/// fold's model trains on the remaining rows.
pub fn cross_validate(
    train: &Dataset,
    folds: usize,
    params: &AdaBoostParams,
    seed: u64,
) -> Result<CvReport, LearnError> {
    if folds < 2 {
        return Err(LearnError::InvalidData("need at least 2 folds".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fold_of = vec![0usize; train.n_rows()];
    for class in [1u8, 0u8] {
        let mut rows = train.rows_with_label(class);
        if rows.len() < folds {
            return Err(LearnError::TooFewRows {
                class,
                rows: rows.len(),
                folds,
            });
        }
        rows.shuffle(&mut rng);
        for (i, row) in rows.into_iter().enumerate() {
            fold_of[row] = i % folds;
        }
    }
    let per_fold: Vec<MetricsReport> = (0..folds)
        .into_par_iter()
        .map(|fold| {
            let fit_rows: Vec<usize> =
                (0..train.n_rows()).filter(|&r| fold_of[r] != fold).collect();
            let val_rows: Vec<usize> =
                (0..train.n_rows()).filter(|&r| fold_of[r] == fold).collect();
            let model = AdaBoostModel::fit(&train.select_rows(&fit_rows), params)?;
            evaluate_model(&model, &train.select_rows(&val_rows))
        })
        .collect::<Result<_, _>>()?;
    let summary = MetricAggregate::of(&per_fold);
    Ok(CvReport { per_fold, summary })
}

/// Scores a fitted model on a dataset.
pub fn evaluate_model(model: &AdaBoostModel, data: &Dataset) -> Result<MetricsReport, LearnError> {
    let mut predictions = Vec::with_capacity(data.n_rows());
    let mut scores = Vec::with_capacity(data.n_rows());
    for i in 0..data.n_rows() {
        predictions.push(model.predict(data.row(i))?);
        scores.push(model.predict_proba(data.row(i))?);
    }
    compute_metrics(data.labels(), &predictions, &scores)
}

/// A named feature tier: the column indices (into the full matrix) it keeps.
#[derive(Debug, Clone, PartialEq)]
pub struct TierSpec {
    pub name: String,
    pub columns: Vec<usize>,
}

/// Full experimental parameters for the tier protocol.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentParams {
    pub boost: AdaBoostParams,
    pub k_samples: usize,
    pub folds: usize,
    pub train_ratio: f64,
}

impl Default for ExperimentParams {
    fn default() -> Self {
        ExperimentParams {
            boost: AdaBoostParams::default(),
            k_samples: 10,
            folds: 10,
            train_ratio: 0.7,
        }
    }
}

/// One tier's averaged results.
#[derive(Debug, Clone, serde::Serialize)]
pub struct TierRow {
    pub tier: String,
    /// Held-out test metrics, averaged over the balanced samples.
    pub test: MetricAggregate,
    /// Cross-validation metrics, averaged over folds then samples.
    pub cv: MetricAggregate,
    /// Test confusion counts summed across samples.
    pub confusion: ConfusionMatrix,
    /// Mean normalized feature importances across sample models
    /// (zero-length when the tier never split).
    pub importances: Vec<f64>,
    pub feature_names: Vec<String>,
}

/// Runs the full protocol per tier: draw `k` balanced samples once, then for
/// every tier and sample, split 70/30 (stratified), cross-validate on the
/// training side, fit on it, and score the held-out side. Results are
/// averaged across the samples.
pub fn incremental_feature_evaluation(
    positives: &Dataset,
    negative_pool: &Dataset,
    tiers: &[TierSpec],
    params: &ExperimentParams,
    seed: u64,
) -> Result<Vec<TierRow>, LearnError> {
    let samples = balanced_samples(positives, negative_pool, params.k_samples, seed)?;
    let mut rows = Vec::with_capacity(tiers.len());
    for tier in tiers {
        let per_sample: Vec<(MetricsReport, MetricAggregate, ConfusionMatrix, Vec<f64>, bool)> =
            samples
                .par_iter()
                .enumerate()
                .map(|(s, sample)| {
                    let sub = sample.select_columns(&tier.columns);
                    let (train, test) =
                        split_train_test(&sub, params.train_ratio, derive_seed(seed, 1000 + s as u64))?;
                    let cv = cross_validate(
                        &train,
                        params.folds,
                        &params.boost,
                        derive_seed(seed, 2000 + s as u64),
                    )?;
                    let model = AdaBoostModel::fit(&train, &params.boost)?;
                    let test_report = evaluate_model(&model, &test)?;
                    Ok((
                        test_report,
                        cv.summary,
                        test_report.confusion,
                        model.importances.clone(),
                        model.has_splits,
                    ))
                })
                .collect::<Result<_, LearnError>>()?;

        let test_reports: Vec<MetricsReport> = per_sample.iter().map(|r| r.0).collect();
        let mut confusion = ConfusionMatrix::default();
        for r in &per_sample {
            confusion.true_positive += r.2.true_positive;
            confusion.false_negative += r.2.false_negative;
            confusion.false_positive += r.2.false_positive;
            confusion.true_negative += r.2.true_negative;
        }
        // CV aggregate across samples: mean of per-sample means; std across
        // the per-sample means, mirroring the test-side aggregation.
        let cv = MetricAggregate {
            f1: MeanStd::of(&per_sample.iter().map(|r| r.1.f1.mean).collect::<Vec<_>>()),
            accuracy: MeanStd::of(&per_sample.iter().map(|r| r.1.accuracy.mean).collect::<Vec<_>>()),
            auc: MeanStd::of(&per_sample.iter().map(|r| r.1.auc.mean).collect::<Vec<_>>()),
        };
        let importances = mean_importances(&per_sample);
        rows.push(TierRow {
            tier: tier.name.clone(),
            test: MetricAggregate::of(&test_reports),
            cv,
            confusion,
            importances,
            feature_names: tier
                .columns
                .iter()
                .map(|&c| positives.feature_names()[c].clone())
                .collect(),
        });
    }
    Ok(rows)
}

fn mean_importances(
    per_sample: &[(MetricsReport, MetricAggregate, ConfusionMatrix, Vec<f64>, bool)],
) -> Vec<f64> {
    let with_splits: Vec<&Vec<f64>> = per_sample
        .iter()
        .filter(|r| r.4)
        .map(|r| &r.3)
        .collect();
    let Some(first) = with_splits.first() else {
        return Vec::new();
    };
    let mut mean = vec![0.0; first.len()];
    for imp in &with_splits {
        for (slot, v) in mean.iter_mut().zip(imp.iter()) {
            *slot += v;
        }
    }
    let total: f64 = mean.iter().sum();
    if total > 0.0 {
        for v in &mut mean {
            *v /= total;
        }
    }
    mean
}
