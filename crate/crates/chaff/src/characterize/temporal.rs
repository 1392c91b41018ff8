//! Monthly deletion ratios and their cumulative series.

use chrono::Datelike;

use crate::dump::Timestamp;
use crate::snapshot::DeletedQuestionSet;

/// A calendar month.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Month {
    pub year: i32,
    pub month: u32,
}

impl Month {
    pub fn of(ts: Timestamp) -> Self {
        Month {
            year: ts.year(),
            month: ts.month(),
        }
    }

    pub fn next(self) -> Self {
        if self.month == 12 {
            Month {
                year: self.year + 1,
                month: 1,
            }
        } else {
            Month {
                year: self.year,
                month: self.month + 1,
            }
        }
    }
}

impl std::fmt::Display for Month {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

/// One month of the deletion-ratio series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TimeSeriesRow {
    pub month: Month,
    /// Deleted questions created this month.
    pub numerator: u64,
    /// All questions created this month.
    pub denominator: u64,
}

impl TimeSeriesRow {
    /// `None` flags a month with no questions at all.
    pub fn ratio(&self) -> Option<f64> {
        if self.denominator == 0 {
            None
        } else {
            Some(self.numerator as f64 / self.denominator as f64)
        }
    }
}

/// Ratio of deleted questions to total questions per creation month,
/// spanning every calendar month from the earliest to the latest question.
pub fn monthly_deletion_ratio(
    questions: impl IntoIterator<Item = (u64, Timestamp)>,
    deleted: &DeletedQuestionSet,
) -> Vec<TimeSeriesRow> {
    use std::collections::BTreeMap;
    let mut totals: BTreeMap<Month, (u64, u64)> = BTreeMap::new();
    for (id, created) in questions {
        let slot = totals.entry(Month::of(created)).or_insert((0, 0));
        slot.1 += 1;
        if deleted.contains(id) {
            slot.0 += 1;
        }
    }
    let (Some(first), Some(last)) = (
        totals.keys().next().copied(),
        totals.keys().next_back().copied(),
    ) else {
        return Vec::new();
    };
    let mut rows = Vec::new();
    let mut m = first;
    loop {
        let (numerator, denominator) = totals.get(&m).copied().unwrap_or((0, 0));
        rows.push(TimeSeriesRow {
            month: m,
            numerator,
            denominator,
        });
        if m == last {
            break;
        }
        m = m.next();
    }
    rows
}

/// Running totals of the deleted-question counts.
pub fn cumulative_deleted(series: &[TimeSeriesRow]) -> Vec<(Month, u64)> {
    let mut total = 0u64;
    series
        .iter()
        .map(|row| {
            total += row.numerator;
            (row.month, total)
        })
        .collect()
}
