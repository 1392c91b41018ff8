//! Author activity snapshots, date-strict at question creation time.

use std::collections::{BTreeMap, BTreeSet};

use crate::dump::{BadgeRecord, PostRecord, PostType, Timestamp, UserRecord};

use super::FeatureError;

/// A prior question's creation-time-visible attributes.
#[derive(Debug, Clone, PartialEq)]
pub struct PriorQuestion {
    pub created: Timestamp,
    pub score: i64,
    pub views: u64,
    pub comments: u64,
    pub favorites: u64,
    pub accepted: bool,
    pub tags: Vec<String>,
}

/// A prior answer's creation-time-visible attributes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriorAnswer {
    pub created: Timestamp,
    pub score: i64,
    pub comments: u64,
}

/// Everything known about an author strictly before a reference time.
#[derive(Debug, Clone, PartialEq)]
pub struct AuthorSnapshot {
    pub account_created: Timestamp,
    pub questions: Vec<PriorQuestion>,
    pub answers: Vec<PriorAnswer>,
    pub badge_dates: Vec<Timestamp>,
    /// Tags the author used on any prior question.
    pub tags_used: BTreeSet<String>,
}

impl AuthorSnapshot {
    /// Account age in days at the reference time; clamped at zero for
    /// brand-new (or inconsistently dated) accounts.
    pub fn account_age_days(&self, t: Timestamp) -> f64 {
        let secs = t.signed_duration_since(self.account_created).num_seconds();
        (secs.max(0) as f64) / 86_400.0
    }
}

/// Builds a snapshot of one author at time `t` from their full record sets.
/// Only items dated strictly before `t` are included, so the reference
/// question itself can never contaminate its own features.
pub fn author_snapshot(
    user: &UserRecord,
    posts: &[SlimPost],
    badges: &[Timestamp],
    t: Timestamp,
) -> AuthorSnapshot {
    let mut questions = Vec::new();
    let mut answers = Vec::new();
    let mut tags_used = BTreeSet::new();
    for post in posts {
        if post.created >= t {
            continue;
        }
        match post.kind {
            PostType::Question => {
                for tag in &post.tags {
                    tags_used.insert(tag.clone());
                }
                questions.push(PriorQuestion {
                    created: post.created,
                    score: post.score,
                    views: post.views,
                    comments: post.comments,
                    favorites: post.favorites,
                    accepted: post.accepted,
                    tags: post.tags.clone(),
                });
            }
            PostType::Answer => answers.push(PriorAnswer {
                created: post.created,
                score: post.score,
                comments: post.comments,
            }),
            PostType::Other(_) => {}
        }
    }
    let mut badge_dates: Vec<Timestamp> = badges.iter().copied().filter(|&d| d < t).collect();
    // Canonical ordering makes every downstream aggregate (including float
    // sums) independent of the input record order.
    questions.sort_by(|a, b| {
        (a.created, a.score, a.views, a.comments, a.favorites, a.accepted, &a.tags).cmp(&(
            b.created, b.score, b.views, b.comments, b.favorites, b.accepted, &b.tags,
        ))
    });
    answers.sort_by(|a, b| {
        (a.created, a.score, a.comments).cmp(&(b.created, b.score, b.comments))
    });
    badge_dates.sort_unstable();
    AuthorSnapshot {
        account_created: user.creation_date,
        questions,
        answers,
        badge_dates,
        tags_used,
    }
}

/// A post reduced to what author snapshots need. Bodies and titles are
/// dropped so the index stays small on full-size dumps.
#[derive(Debug, Clone, PartialEq)]
pub struct SlimPost {
    pub kind: PostType,
    pub created: Timestamp,
    pub score: i64,
    pub views: u64,
    pub comments: u64,
    pub favorites: u64,
    pub accepted: bool,
    pub tags: Vec<String>,
}

impl SlimPost {
    pub fn of(post: &PostRecord) -> Self {
        SlimPost {
            kind: post.post_type,
            created: post.creation_date,
            score: post.score,
            views: post.view_count.unwrap_or(0),
            comments: post.comment_count.unwrap_or(0),
            favorites: post.favorite_count.unwrap_or(0),
            accepted: post.accepted_answer_id.is_some(),
            tags: post.tags.clone(),
        }
    }
}

/// Read-only per-author activity index, built once over a corpus.
#[derive(Debug, Default)]
pub struct AuthorIndex {
    users: BTreeMap<i64, UserRecord>,
    posts_by_owner: BTreeMap<i64, Vec<SlimPost>>,
    badges_by_user: BTreeMap<i64, Vec<Timestamp>>,
}

impl AuthorIndex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_user(&mut self, user: UserRecord) {
        self.users.insert(user.id, user);
    }

    pub fn add_post(&mut self, post: &PostRecord) {
        if let Some(owner) = post.owner_user_id {
            self.posts_by_owner
                .entry(owner)
                .or_default()
                .push(SlimPost::of(post));
        }
    }

    pub fn add_badge(&mut self, badge: &BadgeRecord) {
        self.badges_by_user
            .entry(badge.user_id as i64)
            .or_default()
            .push(badge.award_date);
    }

    pub fn build(
        users: impl IntoIterator<Item = UserRecord>,
        posts: impl IntoIterator<Item = PostRecord>,
        badges: impl IntoIterator<Item = BadgeRecord>,
    ) -> Self {
        let mut index = Self::new();
        for u in users {
            index.add_user(u);
        }
        for p in posts {
            index.add_post(&p);
        }
        for b in badges {
            index.add_badge(&b);
        }
        index
    }

    pub fn user(&self, user_id: i64) -> Option<&UserRecord> {
        self.users.get(&user_id)
    }

    /// Snapshot of `user_id` at time `t`.
    ///
    /// A question whose author is absent (no owner recorded, or no user
    /// record in the dump) cannot produce profile features; callers exclude
    /// such questions and log the count.
    pub fn snapshot(
        &self,
        question_id: u64,
        user_id: Option<i64>,
        t: Timestamp,
    ) -> Result<AuthorSnapshot, FeatureError> {
        let missing = || FeatureError::UnknownUser {
            question_id,
            user_id,
        };
        let uid = user_id.ok_or_else(missing)?;
        let user = self.users.get(&uid).ok_or_else(missing)?;
        let posts = self
            .posts_by_owner
            .get(&uid)
            .map(Vec::as_slice)
            .unwrap_or(&[]);
        let badges = self
            .badges_by_user
            .get(&uid)
            .map(Vec::as_slice)
            .unwrap_or(&[]);
        Ok(author_snapshot(user, posts, badges, t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dump::parse_timestamp;

    fn ts(s: &str) -> Timestamp {
        parse_timestamp(s).unwrap()
    }

    fn user(id: i64, created: &str) -> UserRecord {
        UserRecord {
            id,
            creation_date: ts(created),
            reputation: 1,
            display_name: format!("u{id}"),
        }
    }

    fn slim(kind: PostType, created: &str, score: i64) -> SlimPost {
        SlimPost {
            kind,
            created: ts(created),
            score,
            views: 0,
            comments: 0,
            favorites: 0,
            accepted: false,
            tags: vec![],
        }
    }

    #[test]
    fn strict_date_filter() {
        let u = user(1, "2010-01-01T00:00:00");
        let posts = vec![
            slim(PostType::Question, "2010-02-01T00:00:00", 1),
            slim(PostType::Answer, "2010-03-01T00:00:00", 2),
            slim(PostType::Question, "2010-06-01T00:00:00", 3), // at t: excluded
            slim(PostType::Answer, "2010-07-01T00:00:00", 4),   // after t
        ];
        let badges = vec![ts("2010-02-15T00:00:00"), ts("2010-06-02T00:00:00")];
        let snap = author_snapshot(&u, &posts, &badges, ts("2010-06-01T00:00:00"));
        assert_eq!(snap.questions.len(), 1);
        assert_eq!(snap.answers.len(), 1);
        assert_eq!(snap.badge_dates.len(), 1);
    }

    #[test]
    fn brand_new_account_is_empty_with_zero_age() {
        let u = user(1, "2010-06-01T00:00:00");
        let snap = author_snapshot(&u, &[], &[], ts("2010-06-01T00:00:00"));
        assert_eq!(snap.account_age_days(ts("2010-06-01T00:00:00")), 0.0);
        assert!(snap.questions.is_empty() && snap.answers.is_empty());
    }

    #[test]
    fn matches_brute_force_date_filter_on_interleaved_fixture() {
        let u = user(1, "2010-01-01T00:00:00");
        // Posts every 10 days across 300 days, alternating kinds.
        let posts: Vec<SlimPost> = (0..30)
            .map(|i| {
                let date = ts("2010-01-01T00:00:00") + chrono::Duration::days(10 * i);
                SlimPost {
                    kind: if i % 2 == 0 {
                        PostType::Question
                    } else {
                        PostType::Answer
                    },
                    created: date,
                    score: i,
                    views: 0,
                    comments: 0,
                    favorites: 0,
                    accepted: false,
                    tags: vec![format!("tag{}", i % 5)],
                }
            })
            .collect();
        let t = ts("2010-05-17T13:00:00");
        let snap = author_snapshot(&u, &posts, &[], t);
        let oracle_q = posts
            .iter()
            .filter(|p| p.created < t && p.kind == PostType::Question)
            .count();
        let oracle_a = posts
            .iter()
            .filter(|p| p.created < t && p.kind == PostType::Answer)
            .count();
        assert_eq!(snap.questions.len(), oracle_q);
        assert_eq!(snap.answers.len(), oracle_a);
        let oracle_tags: BTreeSet<String> = posts
            .iter()
            .filter(|p| p.created < t && p.kind == PostType::Question)
            .flat_map(|p| p.tags.iter().cloned())
            .collect();
        assert_eq!(snap.tags_used, oracle_tags);
    }

    #[test]
    fn snapshot_is_invariant_to_input_order() {
        let u = user(1, "2010-01-01T00:00:00");
        let mut posts: Vec<SlimPost> = (0..12)
            .map(|i| {
                let mut p = slim(
                    if i % 3 == 0 {
                        PostType::Question
                    } else {
                        PostType::Answer
                    },
                    "2010-02-01T00:00:00",
                    i % 4,
                );
                p.created += chrono::Duration::days(i % 5);
                p.views = (i % 3) as u64;
                p
            })
            .collect();
        let t = ts("2010-12-01T00:00:00");
        let forward = author_snapshot(&u, &posts, &[], t);
        posts.reverse();
        let reversed = author_snapshot(&u, &posts, &[], t);
        assert_eq!(forward, reversed);
    }

    #[test]
    fn unknown_user_is_an_error() {
        let index = AuthorIndex::new();
        let err = index
            .snapshot(7, Some(42), ts("2011-01-01T00:00:00"))
            .unwrap_err();
        assert!(matches!(err, FeatureError::UnknownUser { question_id: 7, .. }));
        assert!(index
            .snapshot(7, None, ts("2011-01-01T00:00:00"))
            .is_err());
    }
}
