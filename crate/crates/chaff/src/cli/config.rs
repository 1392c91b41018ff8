//! Run configuration: TOML file plus command-line overrides (flags win).

use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::features::FeatureSet;
use crate::learn::{AdaBoostParams, ExperimentParams};

use super::CliError;

/// Environment variable consulted when the config names no lexicon.
pub const LEXICON_ENV: &str = "CHAFF_LEXICON";

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SnapshotSource {
    pub id: String,
    pub date: NaiveDate,
    pub dir: PathBuf,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default)]
pub struct LearnerConfig {
    pub n_estimators: usize,
    pub learning_rate: f64,
    pub max_depth: usize,
    pub folds: usize,
    pub split_ratio: f64,
    pub k_samples: usize,
}

impl Default for LearnerConfig {
    fn default() -> Self {
        LearnerConfig {
            n_estimators: 100,
            learning_rate: 1.0,
            max_depth: 1,
            folds: 10,
            split_ratio: 0.7,
            k_samples: 10,
        }
    }
}

impl LearnerConfig {
    pub fn boost_params(&self) -> AdaBoostParams {
        AdaBoostParams {
            n_estimators: self.n_estimators,
            learning_rate: self.learning_rate,
            max_depth: self.max_depth,
        }
    }

    pub fn experiment_params(&self) -> ExperimentParams {
        ExperimentParams {
            boost: self.boost_params(),
            k_samples: self.k_samples,
            folds: self.folds,
            train_ratio: self.split_ratio,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TierConfig {
    pub name: String,
    /// Feature-set letters, e.g. `["A", "B"]`.
    pub sets: Vec<String>,
}

impl TierConfig {
    pub fn feature_sets(&self) -> Result<Vec<FeatureSet>, CliError> {
        self.sets
            .iter()
            .map(|s| {
                s.parse()
                    .map_err(|e: String| CliError::Usage(format!("tier {}: {e}", self.name)))
            })
            .collect()
    }
}

fn default_tiers() -> Vec<TierConfig> {
    let tier = |name: &str, sets: &[&str]| TierConfig {
        name: name.to_string(),
        sets: sets.iter().map(|s| s.to_string()).collect(),
    };
    vec![
        tier("SA", &["A"]),
        tier("SA+SB", &["A", "B"]),
        tier("SA+SB+SC", &["A", "B", "C"]),
        tier("SA+SB+SC+SD", &["A", "B", "C", "D"]),
    ]
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub snapshots: Vec<SnapshotSource>,
    pub out_dir: PathBuf,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub exclusions: Option<PathBuf>,
    #[serde(default)]
    pub initiators: Option<PathBuf>,
    #[serde(default)]
    pub lexicon: Option<PathBuf>,
    #[serde(default)]
    pub threads: Option<usize>,
    #[serde(default)]
    pub learner: LearnerConfig,
    #[serde(default = "default_tiers")]
    pub tiers: Vec<TierConfig>,
}

/// Flag overrides; each one replaces the matching config field.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub out_dir: Option<PathBuf>,
    /// Generic `section.key=value` assignments applied to the raw TOML.
    pub sets: Vec<String>,
}

impl RunConfig {
    /// Loads a config file, applies overrides, resolves relative paths
    /// against the config file's directory, and validates the input paths.
    pub fn load(path: &Path, overrides: &Overrides) -> Result<RunConfig, CliError> {
        let raw = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let table: toml::Table = raw
            .parse()
            .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
        let mut value = toml::Value::Table(table);
        for assignment in &overrides.sets {
            apply_set(&mut value, assignment)?;
        }
        let mut config: RunConfig = value
            .try_into()
            .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;

        if let Some(seed) = overrides.seed {
            config.seed = seed;
        }
        if let Some(threads) = overrides.threads {
            config.threads = Some(threads);
        }
        if let Some(out) = &overrides.out_dir {
            config.out_dir = out.clone();
        }
        if config.lexicon.is_none() {
            if let Ok(env_path) = std::env::var(LEXICON_ENV) {
                config.lexicon = Some(PathBuf::from(env_path));
            }
        }

        let base = path.parent().unwrap_or_else(|| Path::new("."));
        config.resolve_paths(base);
        config.validate()?;
        Ok(config)
    }

    fn resolve_paths(&mut self, base: &Path) {
        let resolve = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&p);
            }
        };
        for snap in &mut self.snapshots {
            resolve(&mut snap.dir);
        }
        resolve(&mut self.out_dir);
        if let Some(p) = &mut self.exclusions {
            resolve(p);
        }
        if let Some(p) = &mut self.initiators {
            resolve(p);
        }
        if let Some(p) = &mut self.lexicon {
            resolve(p);
        }
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.snapshots.is_empty() {
            return Err(CliError::Usage("config lists no snapshots".into()));
        }
        let mut dates: Vec<NaiveDate> = self.snapshots.iter().map(|s| s.date).collect();
        dates.sort();
        dates.dedup();
        if dates.len() != self.snapshots.len() {
            return Err(CliError::Usage("snapshot dates must be distinct".into()));
        }
        for snap in &self.snapshots {
            if !snap.dir.is_dir() {
                return Err(CliError::Usage(format!(
                    "snapshot {} directory {} does not exist",
                    snap.id,
                    snap.dir.display()
                )));
            }
        }
        for (label, path) in [
            ("exclusions", &self.exclusions),
            ("initiators", &self.initiators),
            ("lexicon", &self.lexicon),
        ] {
            if let Some(p) = path {
                if !p.is_file() {
                    return Err(CliError::Usage(format!(
                        "{label} file {} does not exist",
                        p.display()
                    )));
                }
            }
        }
        if !(0.0..1.0).contains(&self.learner.split_ratio) {
            return Err(CliError::Usage(format!(
                "split_ratio {} outside (0, 1)",
                self.learner.split_ratio
            )));
        }
        if self.tiers.is_empty() {
            return Err(CliError::Usage("config lists no feature tiers".into()));
        }
        Ok(())
    }

    /// Snapshots ordered by date; the last one is the latest.
    pub fn ordered_snapshots(&self) -> Vec<&SnapshotSource> {
        let mut snaps: Vec<&SnapshotSource> = self.snapshots.iter().collect();
        snaps.sort_by_key(|s| s.date);
        snaps
    }

    pub fn latest_snapshot(&self) -> &SnapshotSource {
        self.ordered_snapshots()
            .last()
            .expect("validated: non-empty")
    }

    pub fn earlier_snapshots(&self) -> Vec<&SnapshotSource> {
        let mut snaps = self.ordered_snapshots();
        snaps.pop();
        snaps
    }

    pub fn catalogs_dir(&self) -> PathBuf {
        self.out_dir.join("catalogs")
    }

    pub fn corpus_file(&self) -> PathBuf {
        self.out_dir.join("corpus.csv")
    }

    pub fn reports_dir(&self) -> PathBuf {
        self.out_dir.join("reports")
    }

    pub fn features_file(&self) -> PathBuf {
        self.out_dir.join("features.csv")
    }

    pub fn model_file(&self) -> PathBuf {
        self.out_dir.join("model.json")
    }

    pub fn evaluation_dir(&self) -> PathBuf {
        self.out_dir.join("evaluation")
    }

    pub fn predictions_file(&self) -> PathBuf {
        self.out_dir.join("predictions.csv")
    }

    /// The lexicon path, if any was configured or inherited from the
    /// environment.
    pub fn lexicon_path(&self) -> Result<&Path, CliError> {
        self.lexicon.as_deref().ok_or_else(|| {
            CliError::Usage(format!(
                "no lexicon configured (set `lexicon` in the config or {LEXICON_ENV})"
            ))
        })
    }
}

/// Applies one `path.to.key=value` assignment to a TOML document.
fn apply_set(root: &mut toml::Value, assignment: &str) -> Result<(), CliError> {
    let (path, raw_value) = assignment
        .split_once('=')
        .ok_or_else(|| CliError::Usage(format!("override `{assignment}` is not key=value")))?;
    let value: toml::Value = raw_value
        .parse()
        .unwrap_or_else(|_| toml::Value::String(raw_value.to_string()));
    let mut cursor = root;
    let parts: Vec<&str> = path.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        let table = cursor
            .as_table_mut()
            .ok_or_else(|| CliError::Usage(format!("override `{assignment}`: `{part}` is not a table")))?;
        if i + 1 == parts.len() {
            table.insert(part.to_string(), value);
            return Ok(());
        }
        cursor = table
            .entry(part.to_string())
            .or_insert(toml::Value::Table(Default::default()));
    }
    Ok(())
}

/// Materializes a ready-to-run config for a generated corpus. Used by the
/// examples and the test suite.
pub fn config_for_corpus(
    corpus: &crate::synth::SynthCorpus,
    out_dir: &Path,
    seed: u64,
) -> RunConfig {
    RunConfig {
        snapshots: corpus
            .snapshots
            .iter()
            .map(|(id, date, dir)| SnapshotSource {
                id: id.clone(),
                date: *date,
                dir: dir.clone(),
            })
            .collect(),
        out_dir: out_dir.to_path_buf(),
        seed,
        exclusions: Some(corpus.exclusions_file.clone()),
        initiators: Some(corpus.initiators_file.clone()),
        lexicon: Some(corpus.lexicon_file.clone()),
        threads: None,
        learner: LearnerConfig::default(),
        tiers: default_tiers(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_fixture_config(dir: &Path) -> PathBuf {
        let snap = dir.join("snap");
        std::fs::create_dir_all(&snap).unwrap();
        let path = dir.join("run.toml");
        std::fs::write(
            &path,
            r#"
out_dir = "out"
seed = 9

[[snapshots]]
id = "s1"
date = "2011-09-01"
dir = "snap"
"#,
        )
        .unwrap();
        path
    }

    #[test]
    fn loads_with_defaults_and_resolves_paths() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_fixture_config(dir.path());
        let config = RunConfig::load(&path, &Overrides::default()).unwrap();
        assert_eq!(config.seed, 9);
        assert_eq!(config.learner.n_estimators, 100);
        assert_eq!(config.tiers.len(), 4);
        assert!(config.out_dir.is_absolute() || config.out_dir.starts_with(dir.path()));
        assert!(config.snapshots[0].dir.ends_with("snap"));
    }

    #[test]
    fn flag_overrides_win() {
        let dir = tempfile::tempdir().unwrap();
        let path = write_fixture_config(dir.path());
        let overrides = Overrides {
            seed: Some(77),
            threads: Some(2),
            out_dir: Some(dir.path().join("elsewhere")),
            sets: vec!["learner.n_estimators=5".into()],
        };
        let config = RunConfig::load(&path, &overrides).unwrap();
        assert_eq!(config.seed, 77);
        assert_eq!(config.threads, Some(2));
        assert!(config.out_dir.ends_with("elsewhere"));
        assert_eq!(config.learner.n_estimators, 5);
    }

    #[test]
    fn missing_snapshot_dir_is_usage_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.toml");
        std::fs::write(
            &path,
            r#"
out_dir = "out"
[[snapshots]]
id = "s1"
date = "2011-09-01"
dir = "nope"
"#,
        )
        .unwrap();
        assert!(matches!(
            RunConfig::load(&path, &Overrides::default()),
            Err(CliError::Usage(_))
        ));
    }

    #[test]
    fn tier_letters_parse() {
        let tier = TierConfig {
            name: "x".into(),
            sets: vec!["A".into(), "s_d".into()],
        };
        let sets = tier.feature_sets().unwrap();
        assert_eq!(sets, vec![FeatureSet::A, FeatureSet::D]);
    }
}
