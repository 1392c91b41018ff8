//! Three-set tag algebra over regular, closed, and deleted questions.

use std::collections::{BTreeMap, BTreeSet};

/// Sizes of the seven disjoint regions of the three-set decomposition.
/// The regions partition the tag universe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TagRegions {
    pub regular_only: u64,
    pub closed_only: u64,
    pub deleted_only: u64,
    pub regular_closed: u64,
    pub regular_deleted: u64,
    pub closed_deleted: u64,
    pub all_three: u64,
}

impl TagRegions {
    pub fn universe(&self) -> u64 {
        self.regular_only
            + self.closed_only
            + self.deleted_only
            + self.regular_closed
            + self.regular_deleted
            + self.closed_deleted
            + self.all_three
    }

    /// `(region name, size)` pairs in a fixed emission order.
    pub fn rows(&self) -> [(&'static str, u64); 7] {
        [
            ("regular_only", self.regular_only),
            ("closed_only", self.closed_only),
            ("deleted_only", self.deleted_only),
            ("regular_closed", self.regular_closed),
            ("regular_deleted", self.regular_deleted),
            ("closed_deleted", self.closed_deleted),
            ("all_three", self.all_three),
        ]
    }
}

/// Tag-distribution comparison across the three question classes.
#[derive(Debug, Clone, Default)]
pub struct TagAlgebraReport {
    pub regions: TagRegions,
    /// Tags appearing only on deleted questions, with their deleted-class
    /// frequencies, ordered by descending frequency then name.
    pub exclusive_deleted: Vec<(String, u64)>,
    /// Top-k tag frequency tables per class (word-cloud analogs).
    pub top_regular: Vec<(String, u64)>,
    pub top_closed: Vec<(String, u64)>,
    pub top_deleted: Vec<(String, u64)>,
}

impl TagAlgebraReport {
    /// Fraction of the tag universe that is exclusive to deleted questions.
    pub fn exclusive_deleted_fraction(&self) -> f64 {
        let universe = self.regions.universe();
        if universe == 0 {
            0.0
        } else {
            self.regions.deleted_only as f64 / universe as f64
        }
    }
}

fn frequency_table(tags: impl IntoIterator<Item = String>) -> BTreeMap<String, u64> {
    let mut freq = BTreeMap::new();
    for tag in tags {
        *freq.entry(tag).or_insert(0) += 1;
    }
    freq
}

fn top_k(freq: &BTreeMap<String, u64>, k: usize) -> Vec<(String, u64)> {
    let mut rows: Vec<(String, u64)> = freq.iter().map(|(t, c)| (t.clone(), *c)).collect();
    rows.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    rows.truncate(k);
    rows
}

/// Decomposes the tag multisets of the three classes into the seven-region
/// membership algebra and the per-class frequency tables.
pub fn tag_algebra(
    regular_tags: impl IntoIterator<Item = String>,
    closed_tags: impl IntoIterator<Item = String>,
    deleted_tags: impl IntoIterator<Item = String>,
    top: usize,
) -> TagAlgebraReport {
    let regular = frequency_table(regular_tags);
    let closed = frequency_table(closed_tags);
    let deleted = frequency_table(deleted_tags);

    let universe: BTreeSet<&String> = regular.keys().chain(closed.keys()).chain(deleted.keys()).collect();
    let mut regions = TagRegions::default();
    let mut exclusive_deleted = Vec::new();
    for tag in universe {
        let r = regular.contains_key(tag);
        let c = closed.contains_key(tag);
        let d = deleted.contains_key(tag);
        match (r, c, d) {
            (true, false, false) => regions.regular_only += 1,
            (false, true, false) => regions.closed_only += 1,
            (false, false, true) => {
                regions.deleted_only += 1;
                exclusive_deleted.push((tag.clone(), deleted[tag]));
            }
            (true, true, false) => regions.regular_closed += 1,
            (true, false, true) => regions.regular_deleted += 1,
            (false, true, true) => regions.closed_deleted += 1,
            (true, true, true) => regions.all_three += 1,
            (false, false, false) => unreachable!("tag came from one of the three sets"),
        }
    }
    exclusive_deleted.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));

    TagAlgebraReport {
        regions,
        exclusive_deleted,
        top_regular: top_k(&regular, top),
        top_closed: top_k(&closed, top),
        top_deleted: top_k(&deleted, top),
    }
}
