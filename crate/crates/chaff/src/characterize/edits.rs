//! Edit-history summaries and close-reason distributions.

use std::collections::{BTreeMap, BTreeSet};

use crate::dump::{HistoryType, PostHistoryRecord, Timestamp};
use crate::snapshot::InitiatorPartition;

/// The five canonical close reasons plus the catch-all.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CloseReason {
    Duplicate,
    Subjective,
    OffTopic,
    TooLocalized,
    NotARealQuestion,
    Other,
}

impl CloseReason {
    pub fn as_str(self) -> &'static str {
        match self {
            CloseReason::Duplicate => "duplicate",
            CloseReason::Subjective => "subjective",
            CloseReason::OffTopic => "off_topic",
            CloseReason::TooLocalized => "too_localized",
            CloseReason::NotARealQuestion => "not_a_real_question",
            CloseReason::Other => "other",
        }
    }

    pub const ALL: [CloseReason; 6] = [
        CloseReason::Duplicate,
        CloseReason::Subjective,
        CloseReason::OffTopic,
        CloseReason::TooLocalized,
        CloseReason::NotARealQuestion,
        CloseReason::Other,
    ];
}

/// Matches a close-event comment against the five canonical reasons,
/// case-insensitively and ignoring punctuation, so era variants like
/// "Off-Topic" or "exact duplicate" land in the right bucket. Anything
/// unrecognized is `Other`.
pub fn parse_close_reason(comment: &str) -> CloseReason {
    let collapsed: String = comment
        .chars()
        .filter(|c| c.is_alphabetic())
        .flat_map(char::to_lowercase)
        .collect();
    if collapsed.contains("duplicate") {
        CloseReason::Duplicate
    } else if collapsed.contains("subjective") {
        CloseReason::Subjective
    } else if collapsed.contains("offtopic") {
        CloseReason::OffTopic
    } else if collapsed.contains("toolocalized") {
        CloseReason::TooLocalized
    } else if collapsed.contains("notarealquestion") {
        CloseReason::NotARealQuestion
    } else {
        CloseReason::Other
    }
}

/// Close-reason histogram.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CloseReasonCounts {
    pub duplicate: u64,
    pub subjective: u64,
    pub off_topic: u64,
    pub too_localized: u64,
    pub not_a_real_question: u64,
    pub other: u64,
}

impl CloseReasonCounts {
    fn bump(&mut self, reason: CloseReason) {
        match reason {
            CloseReason::Duplicate => self.duplicate += 1,
            CloseReason::Subjective => self.subjective += 1,
            CloseReason::OffTopic => self.off_topic += 1,
            CloseReason::TooLocalized => self.too_localized += 1,
            CloseReason::NotARealQuestion => self.not_a_real_question += 1,
            CloseReason::Other => self.other += 1,
        }
    }

    pub fn get(&self, reason: CloseReason) -> u64 {
        match reason {
            CloseReason::Duplicate => self.duplicate,
            CloseReason::Subjective => self.subjective,
            CloseReason::OffTopic => self.off_topic,
            CloseReason::TooLocalized => self.too_localized,
            CloseReason::NotARealQuestion => self.not_a_real_question,
            CloseReason::Other => self.other,
        }
    }

    pub fn total(&self) -> u64 {
        CloseReason::ALL.iter().map(|&r| self.get(r)).sum()
    }
}

/// Per-partition edit statistics for one group of corpus questions.
#[derive(Debug, Clone, Default)]
pub struct PartitionEditStats {
    pub partition: &'static str,
    pub questions: u64,
    /// Questions with at least one content edit of any kind.
    pub edited_any: u64,
    pub edit_title: u64,
    pub edit_body: u64,
    pub edit_tags: u64,
    pub suggested_edit: u64,
    /// Questions carrying a close event at or before their deletion time
    /// (or any close event when no deletion event exists).
    pub closed_before_deletion: u64,
    /// Reason of each closed question's first close event.
    pub close_reasons: CloseReasonCounts,
}

#[derive(Default)]
struct QuestionHistory {
    edit_title: bool,
    edit_body: bool,
    edit_tags: bool,
    suggested: bool,
    first_close: Option<(Timestamp, CloseReason)>,
    first_delete: Option<Timestamp>,
}

/// Summarizes edit histories for the corpus, per initiator partition plus an
/// `all` row covering every corpus question.
pub fn edit_summary(
    history: &[PostHistoryRecord],
    partition: &InitiatorPartition,
) -> Vec<PartitionEditStats> {
    let in_scope: BTreeSet<u64> = partition
        .author
        .iter()
        .chain(partition.moderator.iter())
        .chain(partition.unknown.iter())
        .copied()
        .collect();
    let mut per_question: BTreeMap<u64, QuestionHistory> = BTreeMap::new();
    for event in history {
        if !in_scope.contains(&event.post_id) {
            continue;
        }
        let q = per_question.entry(event.post_id).or_default();
        match event.history_type {
            HistoryType::EditTitle => q.edit_title = true,
            HistoryType::EditBody => q.edit_body = true,
            HistoryType::EditTags => q.edit_tags = true,
            HistoryType::SuggestedEditApplied => q.suggested = true,
            HistoryType::PostClosed => {
                let reason = parse_close_reason(event.comment.as_deref().unwrap_or(""));
                let candidate = (event.creation_date, reason);
                if q.first_close.is_none_or(|(t, _)| event.creation_date < t) {
                    q.first_close = Some(candidate);
                }
            }
            HistoryType::PostDeleted
                if q.first_delete.is_none_or(|t| event.creation_date < t) =>
            {
                q.first_delete = Some(event.creation_date);
            }
            _ => {}
        }
    }

    let empty = QuestionHistory::default();
    let collect = |name: &'static str, ids: Box<dyn Iterator<Item = u64> + '_>| {
        let mut stats = PartitionEditStats {
            partition: name,
            ..Default::default()
        };
        for id in ids {
            stats.questions += 1;
            let q = per_question.get(&id).unwrap_or(&empty);
            if q.edit_title {
                stats.edit_title += 1;
            }
            if q.edit_body {
                stats.edit_body += 1;
            }
            if q.edit_tags {
                stats.edit_tags += 1;
            }
            if q.suggested {
                stats.suggested_edit += 1;
            }
            if q.edit_title || q.edit_body || q.edit_tags || q.suggested {
                stats.edited_any += 1;
            }
            if let Some((closed_at, reason)) = q.first_close {
                let before_deletion = match q.first_delete {
                    Some(deleted_at) => closed_at <= deleted_at,
                    None => true,
                };
                if before_deletion {
                    stats.closed_before_deletion += 1;
                    stats.close_reasons.bump(reason);
                }
            }
        }
        stats
    };

    vec![
        collect("author", Box::new(partition.author.iter().copied())),
        collect("moderator", Box::new(partition.moderator.iter().copied())),
        collect("unknown", Box::new(partition.unknown.iter().copied())),
        collect("all", Box::new(in_scope.iter().copied())),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dump::parse_timestamp;
    use crate::snapshot::{join_initiators, DeletedQuestionSet, Initiator, InitiatorAnnotation};

    fn event(post_id: u64, code: u8, date: &str, comment: Option<&str>) -> PostHistoryRecord {
        PostHistoryRecord {
            id: post_id * 100 + code as u64,
            post_id,
            history_type: HistoryType::from_code(code),
            creation_date: parse_timestamp(date).unwrap(),
            comment: comment.map(str::to_owned),
        }
    }

    fn partition(author: &[u64], moderator: &[u64], unknown: &[u64]) -> InitiatorPartition {
        let all: Vec<u64> = author
            .iter()
            .chain(moderator.iter())
            .chain(unknown.iter())
            .copied()
            .collect();
        let deleted = DeletedQuestionSet::from_parts(all.iter().map(|&i| (i, "E".into())), 0);
        let annotations = author
            .iter()
            .map(|&id| InitiatorAnnotation {
                question_id: id,
                initiator: Initiator::Author,
            })
            .chain(moderator.iter().map(|&id| InitiatorAnnotation {
                question_id: id,
                initiator: Initiator::Moderator,
            }))
            .collect::<Vec<_>>();
        join_initiators(&deleted, annotations)
    }

    #[test]
    fn close_reason_matching_is_case_and_punctuation_insensitive() {
        assert_eq!(parse_close_reason("Exact Duplicate"), CloseReason::Duplicate);
        assert_eq!(parse_close_reason("off-topic"), CloseReason::OffTopic);
        assert_eq!(parse_close_reason("OFF TOPIC"), CloseReason::OffTopic);
        assert_eq!(parse_close_reason("too localized"), CloseReason::TooLocalized);
        assert_eq!(
            parse_close_reason("Not a real question"),
            CloseReason::NotARealQuestion
        );
        assert_eq!(
            parse_close_reason("subjective and argumentative"),
            CloseReason::Subjective
        );
        assert_eq!(parse_close_reason("102"), CloseReason::Other);
        assert_eq!(parse_close_reason(""), CloseReason::Other);
    }

    #[test]
    fn single_edit_counts_question_as_edited() {
        let part = partition(&[1], &[], &[]);
        let history = vec![event(1, 5, "2011-01-02T00:00:00", None)];
        let stats = edit_summary(&history, &part);
        let author = &stats[0];
        assert_eq!(author.partition, "author");
        assert_eq!(author.edited_any, 1);
        assert_eq!(author.edit_body, 1);
        assert_eq!(author.edit_title, 0);
    }

    #[test]
    fn fractions_match_counting_oracle() {
        // 6 author questions: 1..=4 edited, 1..=2 closed before deletion,
        // question 5 closed after deletion (not counted), 6 untouched.
        let part = partition(&[1, 2, 3, 4, 5, 6], &[7], &[]);
        let mut history = vec![
            event(1, 4, "2011-01-02T00:00:00", None),
            event(2, 5, "2011-01-02T00:00:00", None),
            event(3, 6, "2011-01-02T00:00:00", None),
            event(4, 24, "2011-01-02T00:00:00", None),
            event(1, 10, "2011-01-03T00:00:00", Some("duplicate")),
            event(2, 10, "2011-01-03T00:00:00", Some("off topic")),
            event(5, 12, "2011-01-03T00:00:00", None),
            event(5, 10, "2011-01-04T00:00:00", Some("duplicate")),
            event(7, 5, "2011-01-02T00:00:00", None),
        ];
        history.push(event(99, 5, "2011-01-02T00:00:00", None)); // out of scope
        let stats = edit_summary(&history, &part);
        let author = stats.iter().find(|s| s.partition == "author").unwrap();
        assert_eq!(author.questions, 6);
        assert_eq!(author.edited_any, 4);
        assert_eq!(author.edit_title, 1);
        assert_eq!(author.edit_body, 1);
        assert_eq!(author.edit_tags, 1);
        assert_eq!(author.suggested_edit, 1);
        assert_eq!(author.closed_before_deletion, 2);
        assert_eq!(author.close_reasons.duplicate, 1);
        assert_eq!(author.close_reasons.off_topic, 1);
        let all = stats.iter().find(|s| s.partition == "all").unwrap();
        assert_eq!(all.questions, 7);
        assert_eq!(all.edited_any, 5);
    }

    #[test]
    fn close_on_deletion_day_counts() {
        let part = partition(&[], &[1], &[]);
        let history = vec![
            event(1, 10, "2011-01-03T00:00:00", Some("too localized")),
            event(1, 12, "2011-01-03T00:00:00", None),
        ];
        let stats = edit_summary(&history, &part);
        let moderator = stats.iter().find(|s| s.partition == "moderator").unwrap();
        assert_eq!(moderator.closed_before_deletion, 1);
        assert_eq!(moderator.close_reasons.too_localized, 1);
    }
}
