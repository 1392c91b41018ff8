//! Versioned model persistence (JSON).
//!
//! The file carries a format version, the boosting parameters, the feature
//! name list (validated against incoming matrices at load time by callers),
//! and every tree. Floats serialize in shortest-roundtrip form, so a
//! save/load cycle reproduces bit-identical predictions.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::util::write_atomic;

use super::adaboost::AdaBoostModel;
use super::LearnError;

pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format_version: u32,
    model: AdaBoostModel,
}

pub fn save_model(path: &Path, model: &AdaBoostModel) -> Result<(), LearnError> {
    let file = ModelFile {
        format_version: MODEL_FORMAT_VERSION,
        model: model.clone(),
    };
    let json = serde_json::to_string(&file)
        .map_err(|e| LearnError::CorruptFile(format!("serialize: {e}")))?;
    write_atomic(path, json.as_bytes())?;
    Ok(())
}

pub fn load_model(path: &Path) -> Result<AdaBoostModel, LearnError> {
    let content = std::fs::read_to_string(path)?;
    let value: serde_json::Value = serde_json::from_str(&content)
        .map_err(|e| LearnError::CorruptFile(e.to_string()))?;
    let found = value
        .get("format_version")
        .and_then(|v| v.as_u64())
        .ok_or_else(|| LearnError::CorruptFile("missing format_version".into()))?
        as u32;
    if found != MODEL_FORMAT_VERSION {
        return Err(LearnError::VersionMismatch {
            found,
            expected: MODEL_FORMAT_VERSION,
        });
    }
    let file: ModelFile =
        serde_json::from_value(value).map_err(|e| LearnError::CorruptFile(e.to_string()))?;
    Ok(file.model)
}

#[cfg(test)]
mod tests {
    use super::super::adaboost::AdaBoostParams;
    use super::super::dataset::test_support::dataset;
    use super::*;

    fn trained() -> AdaBoostModel {
        let rows: Vec<(Vec<f64>, u8)> = (0..40)
            .map(|i| {
                (
                    vec![(i % 7) as f64 + 0.1, (i % 3) as f64],
                    u8::from(i % 7 >= 3),
                )
            })
            .collect();
        let borrowed: Vec<(&[f64], u8)> = rows.iter().map(|(v, l)| (v.as_slice(), *l)).collect();
        AdaBoostModel::fit(
            &dataset(&borrowed),
            &AdaBoostParams {
                n_estimators: 15,
                ..Default::default()
            },
        )
        .unwrap()
    }

    #[test]
    fn round_trip_predictions_bit_identical() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.json");
        let model = trained();
        save_model(&path, &model).unwrap();
        let loaded = load_model(&path).unwrap();
        assert_eq!(loaded, model);
        // 1,000 probe rows across the feature range.
        for i in 0..1000 {
            let row = [(i % 70) as f64 / 10.0, (i % 30) as f64 / 10.0];
            let a = model.predict_proba(&row).unwrap();
            let b = loaded.predict_proba(&row).unwrap();
            assert_eq!(a.to_bits(), b.to_bits(), "row {i}");
        }
    }

    #[test]
    fn truncated_file_is_corrupt() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.json");
        save_model(&path, &trained()).unwrap();
        let content = std::fs::read_to_string(&path).unwrap();
        std::fs::write(&path, &content[..content.len() / 2]).unwrap();
        assert!(matches!(load_model(&path), Err(LearnError::CorruptFile(_))));
    }

    #[test]
    fn version_bump_is_detected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.json");
        save_model(&path, &trained()).unwrap();
        let content = std::fs::read_to_string(&path)
            .unwrap()
            .replace("\"format_version\":1", "\"format_version\":2");
        std::fs::write(&path, content).unwrap();
        assert!(matches!(
            load_model(&path),
            Err(LearnError::VersionMismatch { found: 2, expected: 1 })
        ));
    }
}
