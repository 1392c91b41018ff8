//! Author-deleted versus moderator-deleted attribute comparisons.

use std::collections::BTreeMap;

use crate::dump::{Timestamp, UserRecord};
use crate::snapshot::{InitiatorPartition, QuestionSummary};

use super::distribution::SampleDistribution;

/// Immutable inputs for [`initiator_comparison`].
pub struct ComparisonInputs<'a> {
    pub partition: &'a InitiatorPartition,
    /// Summaries for every corpus question (creation date, score, owner).
    pub questions: &'a BTreeMap<u64, QuestionSummary>,
    /// User records keyed by id, for account ages.
    pub users: &'a BTreeMap<i64, UserRecord>,
    /// Deletion timestamps per question, from post-deleted history events
    /// with delete-vote dates as the caller's documented fallback.
    pub deletion_times: &'a BTreeMap<u64, Timestamp>,
    /// Creation times of each author's posts, sorted ascending.
    pub posts_by_owner: &'a BTreeMap<i64, Vec<Timestamp>>,
}

/// Paired author/moderator distributions for one question attribute.
#[derive(Debug, Clone)]
pub struct AttributeDistributions {
    pub attribute: &'static str,
    pub author: SampleDistribution,
    pub moderator: SampleDistribution,
}

/// The four attribute comparisons plus bookkeeping.
#[derive(Debug, Clone)]
pub struct ComparisonReport {
    pub attributes: Vec<AttributeDistributions>,
    /// Questions lacking a deletion timestamp, excluded from the
    /// time-to-delete pair only.
    pub missing_deletion_time: u64,
}

pub const TIME_TO_DELETE: &str = "time_to_delete_seconds";
pub const ACCOUNT_AGE: &str = "account_age_days";
pub const PRIOR_POSTS: &str = "prior_posts";
pub const QUESTION_SCORE: &str = "question_score";

/// Compares author-deleted and moderator-deleted questions on four
/// attributes: time to delete, account age of the owner at question
/// creation, number of the owner's posts strictly before question creation,
/// and question score.
pub fn initiator_comparison(inputs: &ComparisonInputs<'_>) -> ComparisonReport {
    let mut missing_deletion_time = 0;

    let mut collect = |ids: &std::collections::BTreeSet<u64>| {
        let mut time_to_delete = Vec::new();
        let mut account_age = Vec::new();
        let mut prior_posts = Vec::new();
        let mut score = Vec::new();
        for &id in ids {
            let Some(summary) = inputs.questions.get(&id) else {
                continue;
            };
            score.push(summary.score as f64);
            match inputs.deletion_times.get(&id) {
                Some(deleted_at) => {
                    let secs = deleted_at
                        .signed_duration_since(summary.creation_date)
                        .num_seconds();
                    if secs >= 0 {
                        time_to_delete.push(secs as f64);
                    }
                }
                None => missing_deletion_time += 1,
            }
            if let Some(owner) = summary.owner_user_id {
                if let Some(user) = inputs.users.get(&owner) {
                    let days = summary
                        .creation_date
                        .signed_duration_since(user.creation_date)
                        .num_seconds() as f64
                        / 86_400.0;
                    account_age.push(days.max(0.0));
                }
                if let Some(posts) = inputs.posts_by_owner.get(&owner) {
                    let prior = posts.partition_point(|&t| t < summary.creation_date);
                    prior_posts.push(prior as f64);
                } else {
                    prior_posts.push(0.0);
                }
            }
        }
        (time_to_delete, account_age, prior_posts, score)
    };

    let (a_time, a_age, a_prior, a_score) = collect(&inputs.partition.author);
    let (m_time, m_age, m_prior, m_score) = collect(&inputs.partition.moderator);

    let pair = |attribute, author: Vec<f64>, moderator: Vec<f64>| AttributeDistributions {
        attribute,
        author: SampleDistribution::new(author),
        moderator: SampleDistribution::new(moderator),
    };
    ComparisonReport {
        attributes: vec![
            pair(TIME_TO_DELETE, a_time, m_time),
            pair(ACCOUNT_AGE, a_age, m_age),
            pair(PRIOR_POSTS, a_prior, m_prior),
            pair(QUESTION_SCORE, a_score, m_score),
        ],
        missing_deletion_time,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dump::parse_timestamp;
    use crate::snapshot::{join_initiators, DeletedQuestionSet, Initiator, InitiatorAnnotation};

    fn ts(s: &str) -> Timestamp {
        parse_timestamp(s).unwrap()
    }

    fn summary(created: &str, score: i64, owner: i64) -> QuestionSummary {
        QuestionSummary {
            creation_date: ts(created),
            score,
            owner_user_id: Some(owner),
            tags: vec![],
        }
    }

    fn user(id: i64, created: &str) -> (i64, UserRecord) {
        (
            id,
            UserRecord {
                id,
                creation_date: ts(created),
                reputation: 1,
                display_name: format!("u{id}"),
            },
        )
    }

    #[test]
    fn four_attribute_pairs_with_hand_values() {
        let deleted = DeletedQuestionSet::from_parts(
            [(1, "E".to_string()), (2, "E".to_string())],
            0,
        );
        let partition = join_initiators(
            &deleted,
            [
                InitiatorAnnotation {
                    question_id: 1,
                    initiator: Initiator::Author,
                },
                InitiatorAnnotation {
                    question_id: 2,
                    initiator: Initiator::Moderator,
                },
            ],
        );
        // Author account created 100 days before their question.
        let questions: BTreeMap<u64, QuestionSummary> = [
            (1, summary("2011-04-11T00:00:00", -9, 10)),
            (2, summary("2011-04-11T00:00:00", 0, 20)),
        ]
        .into();
        let users: BTreeMap<i64, UserRecord> =
            [user(10, "2011-01-01T00:00:00"), user(20, "2011-04-11T00:00:00")].into();
        let deletion_times: BTreeMap<u64, Timestamp> = [(1, ts("2011-04-12T00:00:00"))].into();
        let posts_by_owner: BTreeMap<i64, Vec<Timestamp>> = [
            (10, vec![ts("2011-02-01T00:00:00"), ts("2011-03-01T00:00:00"), ts("2011-04-11T00:00:00")]),
            (20, vec![]),
        ]
        .into();
        let report = initiator_comparison(&ComparisonInputs {
            partition: &partition,
            questions: &questions,
            users: &users,
            deletion_times: &deletion_times,
            posts_by_owner: &posts_by_owner,
        });
        assert_eq!(report.missing_deletion_time, 1);

        let by_name: BTreeMap<&str, &AttributeDistributions> = report
            .attributes
            .iter()
            .map(|a| (a.attribute, a))
            .collect();
        assert_eq!(
            by_name[TIME_TO_DELETE].author.samples(),
            &[86_400.0],
            "one day to delete"
        );
        assert!(by_name[TIME_TO_DELETE].moderator.is_empty());
        assert_eq!(by_name[ACCOUNT_AGE].author.samples(), &[100.0]);
        assert_eq!(by_name[ACCOUNT_AGE].moderator.samples(), &[0.0]);
        // Strictly-before filter: the question itself (same timestamp) is
        // not a prior post.
        assert_eq!(by_name[PRIOR_POSTS].author.samples(), &[2.0]);
        assert_eq!(by_name[QUESTION_SCORE].author.samples(), &[-9.0]);
    }

    #[test]
    fn quartiles_match_order_statistic_oracle() {
        let ids: Vec<u64> = (1..=40).collect();
        let deleted =
            DeletedQuestionSet::from_parts(ids.iter().map(|&id| (id, "E".into())), 0);
        let partition = join_initiators(
            &deleted,
            ids.iter().map(|&id| InitiatorAnnotation {
                question_id: id,
                initiator: Initiator::Author,
            }),
        );
        // Scores 1..=40 planted directly.
        let questions: BTreeMap<u64, QuestionSummary> = ids
            .iter()
            .map(|&id| (id, summary("2011-04-11T00:00:00", id as i64, 10)))
            .collect();
        let users: BTreeMap<i64, UserRecord> = [user(10, "2011-01-01T00:00:00")].into();
        let report = initiator_comparison(&ComparisonInputs {
            partition: &partition,
            questions: &questions,
            users: &users,
            deletion_times: &BTreeMap::new(),
            posts_by_owner: &BTreeMap::new(),
        });
        let scores = &report
            .attributes
            .iter()
            .find(|a| a.attribute == QUESTION_SCORE)
            .unwrap()
            .author;
        let sorted: Vec<f64> = (1..=40).map(|v| v as f64).collect();
        let (q1, q2, q3) = scores.quartiles().unwrap();
        assert_eq!(q1, sorted[(0.25f64 * 40.0).ceil() as usize - 1]);
        assert_eq!(q2, sorted[(0.50f64 * 40.0).ceil() as usize - 1]);
        assert_eq!(q3, sorted[(0.75f64 * 40.0).ceil() as usize - 1]);
    }
}
