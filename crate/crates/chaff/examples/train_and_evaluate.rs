//! Train the boosted model on a planted-signal corpus and inspect the
//! tiered evaluation.
//!
//! The fixture's deletion signal lives in the profile and syntactic
//! columns, so the incremental tiers improve as those sets join in.
//!
//! Run with: `cargo run -p chaff --example train_and_evaluate`

use chaff::features::{feature_indices, FeatureSet, Label};
use chaff::learn::{
    feature_importance, incremental_feature_evaluation, AdaBoostModel, Dataset, ExperimentParams,
    TierSpec,
};
use chaff::synth::{generate, SynthConfig};

fn main() -> anyhow::Result<()> {
    // Build the feature matrix straight from a generated corpus.
    let dir = tempfile::tempdir()?;
    let corpus = generate(
        &dir.path().join("fixture"),
        &SynthConfig {
            questions: 1200,
            deleted_fraction: 0.35,
            seed: 3,
        },
    )?;
    let config = chaff::cli::config_for_corpus(&corpus, &dir.path().join("out"), 3);
    std::fs::create_dir_all(&config.out_dir)?;
    for step in [
        chaff::cli::cmd_ingest,
        chaff::cli::cmd_diff,
        chaff::cli::cmd_features,
    ] {
        step(&config).map_err(|e| anyhow::anyhow!(e.to_string()))?;
    }
    let vectors = chaff::features::read_matrix(&config.features_file())
        .map_err(|e| anyhow::anyhow!(e.to_string()))?;
    let positives: Vec<_> = vectors.iter().filter(|v| v.label == Label::Deleted).cloned().collect();
    let negatives: Vec<_> = vectors.iter().filter(|v| v.label == Label::NonDeleted).cloned().collect();
    println!("{} positives, {} negatives in the pool", positives.len(), negatives.len());
    let positives = Dataset::from_vectors(&positives)?;
    let negatives = Dataset::from_vectors(&negatives)?;

    // The standard incremental tiers, one feature group at a time.
    let tiers: Vec<TierSpec> = [
        ("SA", vec![FeatureSet::A]),
        ("SA+SB", vec![FeatureSet::A, FeatureSet::B]),
        ("SA+SB+SC", vec![FeatureSet::A, FeatureSet::B, FeatureSet::C]),
        ("SA+SB+SC+SD", vec![FeatureSet::A, FeatureSet::B, FeatureSet::C, FeatureSet::D]),
    ]
    .into_iter()
    .map(|(name, sets)| TierSpec {
        name: name.into(),
        columns: feature_indices(&sets),
    })
    .collect();

    let params = ExperimentParams {
        k_samples: 5,
        folds: 5,
        ..Default::default()
    };
    let rows = incremental_feature_evaluation(&positives, &negatives, &tiers, &params, 3)?;
    println!("\n{:<14} {:>8} {:>8} {:>8}", "tier", "F1", "acc", "AUC");
    for row in &rows {
        println!(
            "{:<14} {:>8.2} {:>8.2} {:>8.2}",
            row.tier,
            row.test.f1.mean * 100.0,
            row.test.accuracy.mean * 100.0,
            row.test.auc.mean * 100.0,
        );
    }

    // A single model's ranked feature importances.
    let sample = chaff::learn::balanced_samples(&positives, &negatives, 1, 3)?.remove(0);
    let model = AdaBoostModel::fit(&sample, &Default::default())?;
    println!("\ntop features of a single trained model:");
    for entry in feature_importance(&model).into_iter().take(8) {
        if entry.importance == 0.0 {
            break;
        }
        println!("  {:<26} {:.4}", entry.feature_name, entry.importance);
    }
    Ok(())
}
