//! Delete-vote latency and vote-count distribution.

use std::collections::BTreeMap;

use crate::dump::{Timestamp, VoteRecord, VoteType};
use crate::snapshot::DeletedQuestionSet;

use super::distribution::LatencyDistribution;

/// Time from question creation to its first deletion vote.
#[derive(Debug, Clone, Default)]
pub struct VoteLatencyReport {
    pub distribution: LatencyDistribution,
    /// Corpus questions with at least one deletion vote.
    pub questions_with_votes: u64,
    /// Corpus questions with no deletion vote at all.
    pub questions_without_votes: u64,
    /// Votes that predate their question (dump bugs); warned and excluded.
    pub negative_excluded: u64,
}

/// Latency from creation to the earliest deletion vote, one sample per
/// corpus question that received deletion votes. Vote dates are
/// date-granular, so a same-day vote is a zero latency.
pub fn first_delete_vote_latency(
    votes: &[VoteRecord],
    deleted: &DeletedQuestionSet,
    creation_dates: &BTreeMap<u64, Timestamp>,
) -> VoteLatencyReport {
    let mut earliest: BTreeMap<u64, Timestamp> = BTreeMap::new();
    for vote in votes {
        if vote.vote_type != VoteType::Deletion || !deleted.contains(vote.post_id) {
            continue;
        }
        earliest
            .entry(vote.post_id)
            .and_modify(|t| *t = (*t).min(vote.creation_date))
            .or_insert(vote.creation_date);
    }
    let mut samples = Vec::with_capacity(earliest.len());
    let mut negative_excluded = 0;
    let mut questions_with_votes = 0;
    for (id, first_vote) in &earliest {
        let Some(created) = creation_dates.get(id) else {
            continue;
        };
        questions_with_votes += 1;
        // Compare at date granularity: the dump truncates vote times, so a
        // vote on the creation day must not look "negative" against an
        // afternoon creation timestamp.
        let delta = first_vote.date().signed_duration_since(created.date());
        let seconds = delta.num_seconds();
        if seconds < 0 {
            negative_excluded += 1;
            continue;
        }
        samples.push(seconds as f64);
    }
    let questions_without_votes = deleted.len() as u64 - questions_with_votes;
    VoteLatencyReport {
        distribution: LatencyDistribution::from_seconds(samples),
        questions_with_votes,
        questions_without_votes,
        negative_excluded,
    }
}

/// One bucket of the deletion-vote histogram.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VoteBucket {
    /// 1..=4 deletion votes, or 5 meaning "5 or more".
    pub votes: u8,
    pub questions: u64,
    /// Fraction over questions with at least one deletion vote.
    pub fraction: f64,
}

impl VoteBucket {
    pub fn label(&self) -> String {
        if self.votes >= 5 {
            "5+".to_string()
        } else {
            self.votes.to_string()
        }
    }
}

/// Deletion-vote count distribution over corpus questions.
#[derive(Debug, Clone, Default)]
pub struct VoteHistogram {
    pub buckets: Vec<VoteBucket>,
    /// Questions with at least one deletion vote.
    pub total: u64,
}

/// Buckets corpus questions by how many deletion votes they received
/// (1, 2, 3, 4, 5+). Fractions are over the vote-bearing population.
pub fn delete_vote_histogram(votes: &[VoteRecord], deleted: &DeletedQuestionSet) -> VoteHistogram {
    let mut per_question: BTreeMap<u64, u64> = BTreeMap::new();
    for vote in votes {
        if vote.vote_type == VoteType::Deletion && deleted.contains(vote.post_id) {
            *per_question.entry(vote.post_id).or_insert(0) += 1;
        }
    }
    let total = per_question.len() as u64;
    let mut counts = [0u64; 5];
    for &n in per_question.values() {
        let bucket = (n.min(5) - 1) as usize;
        counts[bucket] += 1;
    }
    let buckets = counts
        .iter()
        .enumerate()
        .map(|(i, &questions)| VoteBucket {
            votes: i as u8 + 1,
            questions,
            fraction: if total == 0 {
                0.0
            } else {
                questions as f64 / total as f64
            },
        })
        .collect();
    VoteHistogram { buckets, total }
}
