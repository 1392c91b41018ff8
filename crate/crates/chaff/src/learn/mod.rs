//! Balanced-sampling experimental framework: decision trees, AdaBoost with
//! the SAMME.R update, metrics, and the tiered evaluation protocol.

mod adaboost;
mod dataset;
mod eval;
mod metrics;
mod model_io;
mod sampling;
mod tree;

pub use adaboost::{feature_importance, AdaBoostModel, AdaBoostParams, ImportanceEntry};
pub use dataset::Dataset;
pub use eval::{
    cross_validate, incremental_feature_evaluation, split_train_test, CvReport, ExperimentParams,
    MeanStd, MetricAggregate, TierRow, TierSpec,
};
pub use metrics::{auc, compute_metrics, ConfusionMatrix, MetricsReport};
pub use model_io::{load_model, save_model, MODEL_FORMAT_VERSION};
pub use sampling::balanced_samples;
pub use tree::{DecisionTree, SortedColumns};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LearnError {
    #[error("degenerate data: {0}")]
    DegenerateData(String),
    #[error("invalid data: {0}")]
    InvalidData(String),
    #[error("negative pool holds {pool} rows but {needed} are needed")]
    InsufficientNegatives { pool: usize, needed: usize },
    #[error("class {class} has {rows} rows, fewer than {folds} folds")]
    TooFewRows { class: u8, rows: usize, folds: usize },
    #[error("dimension mismatch: expected {expected} features, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("empty input")]
    EmptyInput,
    #[error("model format version {found} unsupported (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },
    #[error("corrupt model file: {0}")]
    CorruptFile(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
