//! Row-major labeled feature matrix.

use crate::features::{FeatureVector, Label};

use super::LearnError;

/// A dense `n × d` matrix with binary labels and stable row identities.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    values: Vec<f64>,
    labels: Vec<u8>,
    ids: Vec<u64>,
    feature_names: Vec<String>,
    n_features: usize,
}

impl Dataset {
    /// Builds a dataset, validating that every value is finite and every
    /// label is 0 or 1.
    pub fn new(
        values: Vec<f64>,
        labels: Vec<u8>,
        ids: Vec<u64>,
        feature_names: Vec<String>,
    ) -> Result<Self, LearnError> {
        let n_features = feature_names.len();
        if n_features == 0 {
            return Err(LearnError::InvalidData("no feature columns".into()));
        }
        if labels.len() != ids.len() || values.len() != labels.len() * n_features {
            return Err(LearnError::InvalidData(format!(
                "shape mismatch: {} values, {} labels, {} ids, {} columns",
                values.len(),
                labels.len(),
                ids.len(),
                n_features
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(LearnError::InvalidData(format!("non-finite value {v}")));
        }
        if labels.iter().any(|&l| l > 1) {
            return Err(LearnError::InvalidData("labels must be 0 or 1".into()));
        }
        Ok(Dataset {
            values,
            labels,
            ids,
            feature_names,
            n_features,
        })
    }

    /// Builds from labeled feature vectors; `deleted` maps to 1,
    /// `non_deleted` to 0, and unlabeled rows are rejected.
    pub fn from_vectors(vectors: &[FeatureVector]) -> Result<Self, LearnError> {
        let mut values = Vec::with_capacity(vectors.len() * crate::features::FEATURE_COUNT);
        let mut labels = Vec::with_capacity(vectors.len());
        let mut ids = Vec::with_capacity(vectors.len());
        for v in vectors {
            let label = match v.label {
                Label::Deleted => 1,
                Label::NonDeleted => 0,
                Label::Unlabeled => {
                    return Err(LearnError::InvalidData(format!(
                        "question {} is unlabeled",
                        v.question_id
                    )))
                }
            };
            values.extend_from_slice(&v.values);
            labels.push(label);
            ids.push(v.question_id);
        }
        Dataset::new(
            values,
            labels,
            ids,
            crate::features::FEATURE_NAMES
                .iter()
                .map(|n| n.to_string())
                .collect(),
        )
    }

    pub fn n_rows(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n_features..(i + 1) * self.n_features]
    }

    pub fn value(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.n_features + col]
    }

    pub fn label(&self, i: usize) -> u8 {
        self.labels[i]
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn id(&self, i: usize) -> u64 {
        self.ids[i]
    }

    pub fn ids(&self) -> &[u64] {
        &self.ids
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    /// Rows whose label is `label`, in order.
    pub fn rows_with_label(&self, label: u8) -> Vec<usize> {
        (0..self.n_rows()).filter(|&i| self.labels[i] == label).collect()
    }

    /// A new dataset holding the given rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> Dataset {
        let mut values = Vec::with_capacity(rows.len() * self.n_features);
        let mut labels = Vec::with_capacity(rows.len());
        let mut ids = Vec::with_capacity(rows.len());
        for &r in rows {
            values.extend_from_slice(self.row(r));
            labels.push(self.labels[r]);
            ids.push(self.ids[r]);
        }
        Dataset {
            values,
            labels,
            ids,
            feature_names: self.feature_names.clone(),
            n_features: self.n_features,
        }
    }

    /// A new dataset keeping only the given columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Dataset {
        let mut values = Vec::with_capacity(self.n_rows() * cols.len());
        for r in 0..self.n_rows() {
            let row = self.row(r);
            for &c in cols {
                values.push(row[c]);
            }
        }
        Dataset {
            values,
            labels: self.labels.clone(),
            ids: self.ids.clone(),
            feature_names: cols.iter().map(|&c| self.feature_names[c].clone()).collect(),
            n_features: cols.len(),
        }
    }

    /// Concatenates two datasets with identical columns.
    pub fn concat(&self, other: &Dataset) -> Result<Dataset, LearnError> {
        if self.feature_names != other.feature_names {
            return Err(LearnError::InvalidData(
                "column mismatch between datasets".into(),
            ));
        }
        let mut values = self.values.clone();
        values.extend_from_slice(&other.values);
        let mut labels = self.labels.clone();
        labels.extend_from_slice(&other.labels);
        let mut ids = self.ids.clone();
        ids.extend_from_slice(&other.ids);
        Ok(Dataset {
            values,
            labels,
            ids,
            feature_names: self.feature_names.clone(),
            n_features: self.n_features,
        })
    }
}


#[cfg(test)]
mod tests {
    use super::test_support::dataset;
    use super::*;

    #[test]
    fn validates_shape_and_values() {
        assert!(Dataset::new(vec![1.0], vec![0], vec![1], vec!["a".into()]).is_ok());
        assert!(Dataset::new(vec![f64::NAN], vec![0], vec![1], vec!["a".into()]).is_err());
        assert!(Dataset::new(vec![1.0], vec![2], vec![1], vec!["a".into()]).is_err());
        assert!(Dataset::new(vec![1.0, 2.0], vec![0], vec![1], vec!["a".into()]).is_err());
    }

    #[test]
    fn select_rows_and_columns() {
        let data = dataset(&[
            (&[1.0, 2.0, 3.0], 0),
            (&[4.0, 5.0, 6.0], 1),
            (&[7.0, 8.0, 9.0], 0),
        ]);
        let rows = data.select_rows(&[2, 0]);
        assert_eq!(rows.row(0), &[7.0, 8.0, 9.0]);
        assert_eq!(rows.label(1), 0);
        let cols = data.select_columns(&[2, 0]);
        assert_eq!(cols.row(1), &[6.0, 4.0]);
        assert_eq!(cols.feature_names(), &["f2".to_string(), "f0".to_string()]);
    }

    #[test]
    fn concat_requires_matching_columns() {
        let a = dataset(&[(&[1.0], 0)]);
        let b = dataset(&[(&[2.0], 1)]);
        let joined = a.concat(&b).unwrap();
        assert_eq!(joined.n_rows(), 2);
        let c = dataset(&[(&[1.0, 2.0], 0)]);
        assert!(a.concat(&c).is_err());
    }
}
