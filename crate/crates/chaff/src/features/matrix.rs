//! Feature-matrix CSV: `question_id`, the 47 feature columns in contract
//! order, then `label`.

use std::path::Path;

use super::{FeatureError, FeatureVector, Label, MissingFlags, FEATURE_COUNT, FEATURE_NAMES};
use crate::util::write_atomic;

/// Column names of the matrix file, in order.
pub fn matrix_columns() -> Vec<String> {
    let mut cols = Vec::with_capacity(FEATURE_COUNT + 2);
    cols.push("question_id".to_string());
    cols.extend(FEATURE_NAMES.iter().map(|n| n.to_string()));
    cols.push("label".to_string());
    cols
}

/// Writes vectors to a matrix CSV, atomically.
pub fn write_matrix(path: &Path, vectors: &[FeatureVector]) -> Result<(), FeatureError> {
    let mut out = String::new();
    out.push_str(&matrix_columns().join(","));
    out.push('\n');
    for v in vectors {
        out.push_str(&v.question_id.to_string());
        for value in v.values {
            out.push(',');
            out.push_str(&value.to_string());
        }
        out.push(',');
        out.push_str(v.label.as_str());
        out.push('\n');
    }
    write_atomic(path, out.as_bytes())?;
    Ok(())
}

/// Reads a matrix CSV, validating the full column contract.
pub fn read_matrix(path: &Path) -> Result<Vec<FeatureVector>, FeatureError> {
    let bad = |reason: String| FeatureError::BadMatrix {
        path: path.display().to_string(),
        reason,
    };
    let content = std::fs::read_to_string(path)?;
    let mut lines = content.lines();
    let header = lines.next().ok_or_else(|| bad("empty file".into()))?;
    let expected = matrix_columns().join(",");
    if header != expected {
        return Err(bad(format!(
            "column header mismatch (expected `{expected}`)"
        )));
    }
    let mut vectors = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != FEATURE_COUNT + 2 {
            return Err(bad(format!(
                "row {}: expected {} fields, found {}",
                i + 2,
                FEATURE_COUNT + 2,
                fields.len()
            )));
        }
        let question_id: u64 = fields[0]
            .parse()
            .map_err(|_| bad(format!("row {}: bad question_id", i + 2)))?;
        let mut values = [0.0f64; FEATURE_COUNT];
        for (j, slot) in values.iter_mut().enumerate() {
            let parsed: f64 = fields[j + 1]
                .parse()
                .map_err(|_| bad(format!("row {}: bad value in column {}", i + 2, j + 1)))?;
            if !parsed.is_finite() {
                return Err(bad(format!("row {}: non-finite value", i + 2)));
            }
            *slot = parsed;
        }
        let label: Label = fields[FEATURE_COUNT + 1]
            .parse()
            .map_err(|e: String| bad(format!("row {}: {e}", i + 2)))?;
        vectors.push(FeatureVector {
            question_id,
            label,
            values,
            flags: MissingFlags::default(),
        });
    }
    Ok(vectors)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vector(id: u64, label: Label, seed: f64) -> FeatureVector {
        let mut values = [0.0; FEATURE_COUNT];
        for (i, v) in values.iter_mut().enumerate() {
            *v = seed + i as f64 * 0.5;
        }
        FeatureVector {
            question_id: id,
            label,
            values,
            flags: MissingFlags::default(),
        }
    }

    #[test]
    fn forty_nine_columns() {
        assert_eq!(matrix_columns().len(), 49);
        assert_eq!(matrix_columns()[0], "question_id");
        assert_eq!(matrix_columns()[48], "label");
    }

    #[test]
    fn round_trip_preserves_values_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("features.csv");
        let vectors = vec![
            vector(1, Label::Deleted, 0.125),
            vector(2, Label::NonDeleted, -3.0),
            vector(3, Label::Unlabeled, 1.0 / 3.0),
        ];
        write_matrix(&path, &vectors).unwrap();
        let back = read_matrix(&path).unwrap();
        assert_eq!(back.len(), 3);
        for (a, b) in vectors.iter().zip(&back) {
            assert_eq!(a.question_id, b.question_id);
            assert_eq!(a.label, b.label);
            assert_eq!(a.values, b.values, "shortest-roundtrip floats survive");
        }
    }

    #[test]
    fn header_mismatch_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        std::fs::write(&path, "question_id,nope,label\n").unwrap();
        assert!(matches!(
            read_matrix(&path),
            Err(FeatureError::BadMatrix { .. })
        ));
    }

    #[test]
    fn short_row_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.csv");
        let mut content = matrix_columns().join(",");
        content.push_str("\n1,2,3\n");
        std::fs::write(&path, content).unwrap();
        assert!(read_matrix(&path).is_err());
    }
}
