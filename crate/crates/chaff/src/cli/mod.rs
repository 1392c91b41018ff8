//! Configuration-driven pipeline commands.
//!
//! Grammar:
//!
//! ```text
//! chaff <ingest|diff|characterize|features|train|evaluate|predict>
//!       --config <path> [--seed N] [--threads N] [--out DIR]
//!       [--set section.key=value ...]
//! ```
//!
//! Commands compose through files only: ingest writes catalogs, diff writes
//! the corpus CSV, features writes the matrix, train writes the model, and
//! so on. Every command writes a manifest recording input hashes, the
//! resolved configuration, the seed, and output hashes; reruns with
//! identical inputs produce byte-identical outputs.
//!
//! Exit codes: 0 success, 1 usage/configuration error, 2 data error,
//! 3 internal error.

mod assemble;
mod commands;
mod config;
mod manifest;

pub use commands::{
    cmd_characterize, cmd_diff, cmd_evaluate, cmd_features, cmd_ingest, cmd_predict, cmd_train,
};
pub use config::{config_for_corpus, LearnerConfig, Overrides, RunConfig, SnapshotSource, TierConfig, LEXICON_ENV};
pub use manifest::Manifest;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad arguments or configuration (exit 1).
    #[error("{0}")]
    Usage(String),
    /// Malformed or inconsistent data (exit 2).
    #[error("{0}")]
    Data(String),
    /// Unexpected internal failure (exit 3).
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "chaff", version, about = "Deleted-question corpus tooling")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Path to the run configuration (TOML).
    #[arg(long)]
    pub config: std::path::PathBuf,
    /// Override the configured seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads (default: available cores).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Override the configured output directory.
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
    /// Generic config override, e.g. `--set learner.n_estimators=50`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub sets: Vec<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Parse snapshot dumps into catalog files.
    Ingest(CommonArgs),
    /// Compute the deleted-question corpus by snapshot diffing.
    Diff(CommonArgs),
    /// Emit the characterization report tables.
    Characterize(CommonArgs),
    /// Extract the 47-feature creation-time matrix.
    Features(CommonArgs),
    /// Train the boosted-tree model on a balanced sample.
    Train(CommonArgs),
    /// Run the tiered evaluation protocol.
    Evaluate(CommonArgs),
    /// Score a feature matrix with a saved model.
    Predict(CommonArgs),
}

impl Command {
    fn common(&self) -> &CommonArgs {
        match self {
            Command::Ingest(a)
            | Command::Diff(a)
            | Command::Characterize(a)
            | Command::Features(a)
            | Command::Train(a)
            | Command::Evaluate(a)
            | Command::Predict(a) => a,
        }
    }
}

/// Runs a parsed invocation. Returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let common = cli.command.common();
    let overrides = Overrides {
        seed: common.seed,
        threads: common.threads,
        out_dir: common.out.clone(),
        sets: common.sets.clone(),
    };
    let config = RunConfig::load(&common.config, &overrides)?;
    std::fs::create_dir_all(&config.out_dir)
        .map_err(|e| CliError::Internal(format!("create {}: {e}", config.out_dir.display())))?;
    if let Some(threads) = config.threads {
        // Ignore failure: the global pool can only be installed once per
        // process, which is fine for repeated library calls.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    let manifest = match &cli.command {
        Command::Ingest(_) => cmd_ingest(&config)?,
        Command::Diff(_) => cmd_diff(&config)?,
        Command::Characterize(_) => cmd_characterize(&config)?,
        Command::Features(_) => cmd_features(&config)?,
        Command::Train(_) => cmd_train(&config)?,
        Command::Evaluate(_) => cmd_evaluate(&config)?,
        Command::Predict(_) => cmd_predict(&config)?,
    };
    for (key, value) in &manifest.counts {
        println!("{key}: {value}");
    }
    Ok(())
}
