//! Undeletion latency from paired delete/undelete history events.

use std::collections::BTreeMap;

use crate::dump::{HistoryType, PostHistoryRecord};
use crate::snapshot::Initiator;

use super::distribution::LatencyDistribution;

/// Undeletion latencies partitioned by the original deletion's initiator.
#[derive(Debug, Clone, Default)]
pub struct UndeleteReport {
    pub author: LatencyDistribution,
    pub moderator: LatencyDistribution,
    pub unknown: LatencyDistribution,
    /// Undelete events with no preceding delete event (warned, skipped).
    pub unpaired_events: u64,
    /// Questions contributing a latency sample.
    pub undeleted_questions: u64,
}

impl UndeleteReport {
    pub fn for_initiator(&self, initiator: Initiator) -> &LatencyDistribution {
        match initiator {
            Initiator::Author => &self.author,
            Initiator::Moderator => &self.moderator,
            Initiator::Unknown => &self.unknown,
        }
    }
}

/// Computes one latency sample per question that has both a delete and a
/// later undelete event: the time from its first deletion to the first
/// undeletion after it. Initiators come from the annotation map; questions
/// missing there fall into the `unknown` cell.
pub fn undelete_latency(
    history: &[PostHistoryRecord],
    initiators: &BTreeMap<u64, Initiator>,
) -> UndeleteReport {
    #[derive(Default)]
    struct Events {
        deletes: Vec<crate::dump::Timestamp>,
        undeletes: Vec<crate::dump::Timestamp>,
    }
    let mut per_question: BTreeMap<u64, Events> = BTreeMap::new();
    for event in history {
        match event.history_type {
            HistoryType::PostDeleted => per_question
                .entry(event.post_id)
                .or_default()
                .deletes
                .push(event.creation_date),
            HistoryType::PostUndeleted => per_question
                .entry(event.post_id)
                .or_default()
                .undeletes
                .push(event.creation_date),
            _ => {}
        }
    }

    let mut samples: BTreeMap<Initiator, Vec<f64>> = BTreeMap::new();
    let mut unpaired = 0u64;
    let mut undeleted_questions = 0u64;
    for (id, mut events) in per_question {
        if events.undeletes.is_empty() {
            continue; // still deleted; nothing to measure
        }
        events.deletes.sort();
        events.undeletes.sort();
        let Some(&first_delete) = events.deletes.first() else {
            unpaired += events.undeletes.len() as u64;
            continue;
        };
        let Some(&undelete) = events.undeletes.iter().find(|&&t| t >= first_delete) else {
            unpaired += events.undeletes.len() as u64;
            continue;
        };
        undeleted_questions += 1;
        let secs = undelete.signed_duration_since(first_delete).num_seconds() as f64;
        let initiator = initiators.get(&id).copied().unwrap_or(Initiator::Unknown);
        samples.entry(initiator).or_default().push(secs);
    }

    let mut take = |initiator| {
        LatencyDistribution::from_seconds(samples.remove(&initiator).unwrap_or_default())
    };
    UndeleteReport {
        author: take(Initiator::Author),
        moderator: take(Initiator::Moderator),
        unknown: take(Initiator::Unknown),
        unpaired_events: unpaired,
        undeleted_questions,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dump::parse_timestamp;

    fn event(post_id: u64, code: u8, date: &str) -> PostHistoryRecord {
        PostHistoryRecord {
            id: post_id * 100 + code as u64,
            post_id,
            history_type: HistoryType::from_code(code),
            creation_date: parse_timestamp(date).unwrap(),
            comment: None,
        }
    }

    #[test]
    fn ninety_second_pair() {
        let history = vec![
            event(1, 12, "2011-01-01T12:00:00"),
            event(1, 13, "2011-01-01T12:01:30"),
        ];
        let initiators: BTreeMap<u64, Initiator> = [(1, Initiator::Author)].into();
        let report = undelete_latency(&history, &initiators);
        assert_eq!(report.author.samples(), &[90.0]);
        assert_eq!(report.undeleted_questions, 1);
        assert_eq!(report.unpaired_events, 0);
    }

    #[test]
    fn unpaired_undelete_is_skipped_with_warning_count() {
        let history = vec![event(2, 13, "2011-01-01T12:00:00")];
        let report = undelete_latency(&history, &BTreeMap::new());
        assert_eq!(report.unpaired_events, 1);
        assert_eq!(report.undeleted_questions, 0);
    }

    #[test]
    fn still_deleted_questions_contribute_nothing() {
        let history = vec![event(3, 12, "2011-01-01T12:00:00")];
        let report = undelete_latency(&history, &BTreeMap::new());
        assert_eq!(report.undeleted_questions, 0);
        assert_eq!(report.unpaired_events, 0);
    }

    #[test]
    fn percentiles_match_sorted_oracle_per_partition() {
        let mut history = Vec::new();
        let mut initiators = BTreeMap::new();
        // Author questions 1..=10 with latencies 60, 120, ..., 600 seconds.
        for i in 1..=10u64 {
            history.push(event(i, 12, "2011-01-01T00:00:00"));
            let undeleted = parse_timestamp("2011-01-01T00:00:00").unwrap()
                + chrono::Duration::seconds(60 * i as i64);
            history.push(PostHistoryRecord {
                id: i * 100 + 13,
                post_id: i,
                history_type: HistoryType::PostUndeleted,
                creation_date: undeleted,
                comment: None,
            });
            initiators.insert(i, Initiator::Author);
        }
        let report = undelete_latency(&history, &initiators);
        let sorted: Vec<f64> = (1..=10).map(|i| 60.0 * i as f64).collect();
        assert_eq!(report.author.samples(), sorted.as_slice());
        assert_eq!(report.author.percentile(50.0), Some(sorted[4]));
        assert_eq!(report.author.percentile(100.0), Some(600.0));
        assert!(report.moderator.is_empty());
    }

    #[test]
    fn first_pair_wins_for_multiple_cycles() {
        let history = vec![
            event(5, 12, "2011-01-01T00:00:00"),
            event(5, 13, "2011-01-01T00:05:00"),
            event(5, 12, "2011-02-01T00:00:00"),
            event(5, 13, "2011-02-02T00:00:00"),
        ];
        let report = undelete_latency(&history, &BTreeMap::new());
        assert_eq!(report.unknown.samples(), &[300.0]);
    }
}
