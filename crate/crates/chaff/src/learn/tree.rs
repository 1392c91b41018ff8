//! Greedy binary classification tree with exhaustive Gini split search.
//!
//! Split candidates are the midpoints between consecutive distinct sorted
//! values of each feature. The chosen split maximizes the weighted Gini
//! impurity decrease; ties break toward the lowest feature index, then the
//! lowest threshold. Rows with `x[feature] <= threshold` go left.

use serde::{Deserialize, Serialize};

use super::dataset::Dataset;
use super::LearnError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
enum Node {
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf {
        /// Class-probability pair; sums to 1.
        prob: [f64; 2],
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    nodes: Vec<Node>,
    n_features: usize,
    pub max_depth: usize,
    /// Per-feature sums of weight-scaled impurity decreases.
    importances: Vec<f64>,
}

/// Per-feature row orderings, computed once per matrix and shared across
/// boosting rounds (the ordering never changes; only weights do).
#[derive(Debug, Clone)]
pub struct SortedColumns {
    order: Vec<Vec<u32>>,
}

impl SortedColumns {
    pub fn build(data: &Dataset) -> Self {
        let order = (0..data.n_features())
            .map(|f| {
                let mut idx: Vec<u32> = (0..data.n_rows() as u32).collect();
                idx.sort_by(|&a, &b| {
                    data.value(a as usize, f)
                        .total_cmp(&data.value(b as usize, f))
                        .then(a.cmp(&b))
                });
                idx
            })
            .collect();
        SortedColumns { order }
    }
}

fn gini(w0: f64, w1: f64) -> f64 {
    let w = w0 + w1;
    if w <= 0.0 {
        return 0.0;
    }
    let p0 = w0 / w;
    let p1 = w1 / w;
    1.0 - p0 * p0 - p1 * p1
}

struct BestSplit {
    feature: usize,
    threshold: f64,
    gain: f64,
}

struct Builder<'a> {
    data: &'a Dataset,
    weights: &'a [f64],
    sorted: &'a SortedColumns,
    max_depth: usize,
    root_weight: f64,
    nodes: Vec<Node>,
    importances: Vec<f64>,
}

impl Builder<'_> {
    /// Weighted class sums over member rows.
    fn class_sums(&self, members: &[bool]) -> [f64; 2] {
        let mut sums = [0.0, 0.0];
        for (i, &m) in members.iter().enumerate() {
            if m {
                sums[self.data.label(i) as usize] += self.weights[i];
            }
        }
        sums
    }

    fn best_split(&self, members: &[bool], totals: [f64; 2]) -> Option<BestSplit> {
        let parent = gini(totals[0], totals[1]);
        let total_w = totals[0] + totals[1];
        let mut best: Option<BestSplit> = None;
        for (feature, order) in self.sorted.order.iter().enumerate() {
            let mut left = [0.0f64, 0.0];
            let mut prev_value: Option<f64> = None;
            for &row in order {
                let row = row as usize;
                if !members[row] {
                    continue;
                }
                let value = self.data.value(row, feature);
                if let Some(prev) = prev_value {
                    if value > prev {
                        let threshold = (prev + value) / 2.0;
                        let wl = left[0] + left[1];
                        let wr = total_w - wl;
                        if wl > 0.0 && wr > 0.0 {
                            let gain = parent
                                - (wl / total_w) * gini(left[0], left[1])
                                - (wr / total_w) * gini(totals[0] - left[0], totals[1] - left[1]);
                            // Strict improvement keeps the first (lowest
                            // feature, lowest threshold) of any tied gains.
                            if gain > 0.0 && best.as_ref().is_none_or(|b| gain > b.gain) {
                                best = Some(BestSplit {
                                    feature,
                                    threshold,
                                    gain,
                                });
                            }
                        }
                    }
                }
                left[self.data.label(row) as usize] += self.weights[row];
                prev_value = Some(value);
            }
        }
        best
    }

    fn build(&mut self, members: &[bool], depth: usize) -> usize {
        let totals = self.class_sums(members);
        let total_w = totals[0] + totals[1];
        let leaf = |totals: [f64; 2]| Node::Leaf {
            prob: [totals[0] / total_w, totals[1] / total_w],
        };
        if depth >= self.max_depth || totals[0] == 0.0 || totals[1] == 0.0 {
            self.nodes.push(leaf(totals));
            return self.nodes.len() - 1;
        }
        let Some(split) = self.best_split(members, totals) else {
            self.nodes.push(leaf(totals));
            return self.nodes.len() - 1;
        };
        self.importances[split.feature] += (total_w / self.root_weight) * split.gain;

        let mut left_members = vec![false; members.len()];
        let mut right_members = vec![false; members.len()];
        for (i, &m) in members.iter().enumerate() {
            if m {
                if self.data.value(i, split.feature) <= split.threshold {
                    left_members[i] = true;
                } else {
                    right_members[i] = true;
                }
            }
        }
        // Reserve this node's slot before recursing so child indices are known.
        let index = self.nodes.len();
        self.nodes.push(Node::Leaf { prob: [0.0, 0.0] });
        let left = self.build(&left_members, depth + 1);
        let right = self.build(&right_members, depth + 1);
        self.nodes[index] = Node::Split {
            feature: split.feature,
            threshold: split.threshold,
            left,
            right,
        };
        index
    }
}

impl DecisionTree {
    /// Fits a tree on weighted data.
    ///
    /// Weights must be non-negative with a positive sum. A single-class
    /// input produces a single pure leaf (not an error).
    pub fn fit(data: &Dataset, weights: &[f64], max_depth: usize) -> Result<Self, LearnError> {
        let sorted = SortedColumns::build(data);
        Self::fit_presorted(data, weights, max_depth, &sorted)
    }

    /// Fitting path for boosting: column orderings are computed once by the
    /// caller and reused across rounds.
    pub fn fit_presorted(
        data: &Dataset,
        weights: &[f64],
        max_depth: usize,
        sorted: &SortedColumns,
    ) -> Result<Self, LearnError> {
        if data.n_rows() == 0 {
            return Err(LearnError::EmptyInput);
        }
        if weights.len() != data.n_rows() {
            return Err(LearnError::InvalidData(format!(
                "{} weights for {} rows",
                weights.len(),
                data.n_rows()
            )));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(LearnError::InvalidData(
                "weights must be finite and non-negative".into(),
            ));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(LearnError::DegenerateData("zero total weight".into()));
        }
        if max_depth == 0 {
            return Err(LearnError::InvalidData("max_depth must be positive".into()));
        }
        let mut builder = Builder {
            data,
            weights,
            sorted,
            max_depth,
            root_weight: total,
            nodes: Vec::new(),
            importances: vec![0.0; data.n_features()],
        };
        let members = vec![true; data.n_rows()];
        builder.build(&members, 0);
        Ok(DecisionTree {
            nodes: builder.nodes,
            n_features: data.n_features(),
            max_depth,
            importances: builder.importances,
        })
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn n_leaves(&self) -> usize {
        self.nodes
            .iter()
            .filter(|n| matches!(n, Node::Leaf { .. }))
            .count()
    }

    /// Root split as `(feature, threshold)`; `None` for a single leaf.
    pub fn root_split(&self) -> Option<(usize, f64)> {
        match self.nodes.first() {
            Some(Node::Split {
                feature, threshold, ..
            }) => Some((*feature, *threshold)),
            _ => None,
        }
    }

    /// Class-probability estimate for one row.
    pub fn predict_proba(&self, row: &[f64]) -> [f64; 2] {
        let mut at = 0;
        loop {
            match &self.nodes[at] {
                Node::Leaf { prob } => return *prob,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    at = if row[*feature] <= *threshold {
                        *left
                    } else {
                        *right
                    };
                }
            }
        }
    }

    /// Hard prediction; probability ties go to class 0.
    pub fn predict(&self, row: &[f64]) -> u8 {
        let p = self.predict_proba(row);
        u8::from(p[1] > p[0])
    }

    /// Weighted misclassification rate over a dataset.
    pub fn weighted_error(&self, data: &Dataset, weights: &[f64]) -> f64 {
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return 0.0;
        }
        let mut wrong = 0.0;
        for (i, &weight) in weights.iter().enumerate() {
            if self.predict(data.row(i)) != data.label(i) {
                wrong += weight;
            }
        }
        wrong / total
    }

    /// Per-feature sums of weight-scaled Gini decreases from this tree.
    pub fn importances_raw(&self) -> &[f64] {
        &self.importances
    }
}

#[cfg(test)]
mod tests {
    use super::super::dataset::test_support::dataset;
    use super::*;

    /// Exhaustive split oracle, O(n^2) recount per candidate, written
    /// independently of the builder's prefix-sum pass.
    pub(crate) fn oracle_best_split(
        data: &Dataset,
        weights: &[f64],
    ) -> Option<(usize, f64)> {
        let mut totals = [0.0f64, 0.0];
        for i in 0..data.n_rows() {
            totals[data.label(i) as usize] += weights[i];
        }
        let total_w = totals[0] + totals[1];
        let parent = gini(totals[0], totals[1]);
        let mut best: Option<(f64, usize, f64)> = None;
        for f in 0..data.n_features() {
            let mut values: Vec<f64> = (0..data.n_rows()).map(|i| data.value(i, f)).collect();
            values.sort_by(f64::total_cmp);
            values.dedup();
            for pair in values.windows(2) {
                let threshold = (pair[0] + pair[1]) / 2.0;
                let mut left = [0.0f64, 0.0];
                let mut right = [0.0f64, 0.0];
                for i in 0..data.n_rows() {
                    let side = if data.value(i, f) <= threshold {
                        &mut left
                    } else {
                        &mut right
                    };
                    side[data.label(i) as usize] += weights[i];
                }
                let wl = left[0] + left[1];
                let wr = right[0] + right[1];
                if wl <= 0.0 || wr <= 0.0 {
                    continue;
                }
                let gain = parent
                    - (wl / total_w) * gini(left[0], left[1])
                    - (wr / total_w) * gini(right[0], right[1]);
                if gain > 0.0 {
                    let better = match &best {
                        None => true,
                        Some((g, _, _)) => gain > *g,
                    };
                    if better {
                        best = Some((gain, f, threshold));
                    }
                }
            }
        }
        best.map(|(_, f, t)| (f, t))
    }

    #[test]
    fn pure_class_is_single_leaf() {
        let data = dataset(&[(&[0.0], 1), (&[1.0], 1), (&[2.0], 1)]);
        let tree = DecisionTree::fit(&data, &[1.0, 1.0, 1.0], 3).unwrap();
        assert_eq!(tree.n_leaves(), 1);
        assert_eq!(tree.predict_proba(&[5.0]), [0.0, 1.0]);
        assert!(tree.root_split().is_none());
    }

    #[test]
    fn zero_weight_is_an_error() {
        let data = dataset(&[(&[0.0], 0), (&[1.0], 1)]);
        assert!(matches!(
            DecisionTree::fit(&data, &[0.0, 0.0], 1),
            Err(LearnError::DegenerateData(_))
        ));
    }

    #[test]
    fn separable_1d_threshold_in_gap() {
        let data = dataset(&[(&[0.0], 0), (&[1.0], 0), (&[2.0], 1), (&[3.0], 1)]);
        let weights = [1.0; 4];
        let tree = DecisionTree::fit(&data, &weights, 1).unwrap();
        let (f, t) = tree.root_split().unwrap();
        assert_eq!(f, 0);
        assert!(t > 1.0 && t < 2.0, "threshold {t} outside the class gap");
        assert_eq!(tree.weighted_error(&data, &weights), 0.0);
    }

    #[test]
    fn twenty_point_2d_root_matches_oracle() {
        let rows: Vec<(Vec<f64>, u8)> = (0..20)
            .map(|i| {
                let x = (i % 5) as f64;
                let y = (i / 5) as f64;
                let label = u8::from(x + 0.3 * y > 2.0);
                (vec![x, y], label)
            })
            .collect();
        let borrowed: Vec<(&[f64], u8)> = rows.iter().map(|(v, l)| (v.as_slice(), *l)).collect();
        let data = dataset(&borrowed);
        let weights = vec![1.0; 20];
        let tree = DecisionTree::fit(&data, &weights, 1).unwrap();
        assert_eq!(tree.root_split(), oracle_best_split(&data, &weights));
    }

    #[test]
    fn tie_breaks_prefer_lowest_feature_then_threshold() {
        // Two identical columns: any split on feature 1 ties feature 0.
        let data = dataset(&[
            (&[0.0, 0.0], 0),
            (&[1.0, 1.0], 0),
            (&[2.0, 2.0], 1),
            (&[3.0, 3.0], 1),
        ]);
        let tree = DecisionTree::fit(&data, &[1.0; 4], 1).unwrap();
        let (f, t) = tree.root_split().unwrap();
        assert_eq!(f, 0);
        assert_eq!(t, 1.5);
        // Symmetric labels make thresholds 0.5 and 2.5 tie; 1.5 is best, but
        // force a tie with labels 0,1,1,0 where 0.5 and 2.5 have equal gain.
        let xor = dataset(&[(&[0.0], 0), (&[1.0], 1), (&[2.0], 1), (&[3.0], 0)]);
        let tree = DecisionTree::fit(&xor, &[1.0; 4], 1).unwrap();
        assert_eq!(tree.root_split().unwrap(), (0, 0.5));
    }

    #[test]
    fn max_depth_bounds_growth() {
        let data = dataset(&[
            (&[0.0], 0),
            (&[1.0], 1),
            (&[2.0], 0),
            (&[3.0], 1),
            (&[4.0], 0),
        ]);
        let stump = DecisionTree::fit(&data, &[1.0; 5], 1).unwrap();
        assert!(stump.n_leaves() <= 2);
        let deep = DecisionTree::fit(&data, &[1.0; 5], 4).unwrap();
        assert_eq!(deep.weighted_error(&data, &[1.0; 5]), 0.0);
    }

    #[test]
    fn importances_accumulate_only_on_split_features() {
        let data = dataset(&[
            (&[0.0, 9.0], 0),
            (&[1.0, 9.0], 0),
            (&[2.0, 9.0], 1),
            (&[3.0, 9.0], 1),
        ]);
        let tree = DecisionTree::fit(&data, &[1.0; 4], 2).unwrap();
        let imp = tree.importances_raw();
        assert!(imp[0] > 0.0);
        assert_eq!(imp[1], 0.0, "constant column cannot be split");
    }

    #[test]
    fn column_scaling_preserves_structure() {
        let rows: Vec<(Vec<f64>, u8)> = (0..12)
            .map(|i| (vec![i as f64, (i * 7 % 12) as f64], u8::from(i >= 6)))
            .collect();
        let borrowed: Vec<(&[f64], u8)> = rows.iter().map(|(v, l)| (v.as_slice(), *l)).collect();
        let data = dataset(&borrowed);
        let weights = vec![1.0; 12];
        let base = DecisionTree::fit(&data, &weights, 3).unwrap();

        let scaled_rows: Vec<(Vec<f64>, u8)> = rows
            .iter()
            .map(|(v, l)| (vec![v[0] * 4.0, v[1]], *l))
            .collect();
        let borrowed: Vec<(&[f64], u8)> =
            scaled_rows.iter().map(|(v, l)| (v.as_slice(), *l)).collect();
        let scaled = dataset(&borrowed);
        let tree = DecisionTree::fit(&scaled, &weights, 3).unwrap();
        // Same split features and same leaf assignment for every row.
        for (orig, sc) in rows.iter().zip(&scaled_rows) {
            assert_eq!(base.predict_proba(&orig.0), tree.predict_proba(&sc.0));
        }
    }
}
