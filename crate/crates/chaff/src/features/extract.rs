//! The four feature-group extractors and their composition.

use crate::dump::{strip_html, PostRecord, StrippedBody, Timestamp};
use crate::lexicon::{score_text, CategoryScores, Lexicon};

use super::author::{AuthorIndex, AuthorSnapshot};
use super::text_stats::{count_chars, word_stats};
use super::{FeatureError, FeatureVector, Label, MissingFlags, FEATURE_COUNT};

/// Lexicon categories consumed by the content group, in column order.
pub const CONTENT_CATEGORIES: [&str; 8] = [
    "ppron", "pronoun", "space", "relativ", "incl", "cogmech", "social", "i",
];

/// Lexicon categories consumed by the syntactic group, in column order.
pub const SYNTACTIC_CATEGORIES: [&str; 3] = ["funct", "conj", "preps"];

/// Checks that a lexicon defines every category the extractors read.
pub fn validate_lexicon(lexicon: &Lexicon) -> Result<(), FeatureError> {
    let missing: Vec<String> = CONTENT_CATEGORIES
        .iter()
        .chain(SYNTACTIC_CATEGORIES.iter())
        .filter(|c| !lexicon.has_category(c))
        .map(|c| c.to_string())
        .collect();
    if missing.is_empty() {
        Ok(())
    } else {
        Err(FeatureError::MissingCategories(missing))
    }
}

/// Profile features over the author snapshot. Ratios over a zero account
/// age are 0 with the `zero_age` flag set.
pub fn extract_profile(snapshot: &AuthorSnapshot, t: Timestamp) -> ([f64; 12], MissingFlags) {
    let age = snapshot.account_age_days(t);
    let q = &snapshot.questions;
    let a = &snapshot.answers;
    let count = |it: &mut dyn Iterator<Item = i64>, pred: fn(i64) -> bool| {
        it.filter(|&s| pred(s)).count() as f64
    };
    let mut flags = MissingFlags::default();
    let (q_per_day, a_per_day) = if age > 0.0 {
        (q.len() as f64 / age, a.len() as f64 / age)
    } else {
        flags.zero_age = true;
        (0.0, 0.0)
    };
    let values = [
        age,
        count(&mut q.iter().map(|p| p.score), |s| s < 0),
        count(&mut q.iter().map(|p| p.score), |s| s > 0),
        count(&mut q.iter().map(|p| p.score), |s| s == 0),
        count(&mut a.iter().map(|p| p.score), |s| s < 0),
        count(&mut a.iter().map(|p| p.score), |s| s > 0),
        count(&mut a.iter().map(|p| p.score), |s| s == 0),
        q.len() as f64,
        a.len() as f64,
        snapshot.badge_dates.len() as f64,
        q_per_day,
        a_per_day,
    ];
    (values, flags)
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let mut sum = 0.0;
    let mut n = 0u64;
    for v in values {
        sum += v;
        n += 1;
    }
    if n == 0 {
        None
    } else {
        Some(sum / n as f64)
    }
}

/// Community features: six arithmetic means over the author's prior posts.
/// Empty prior sets yield 0 with the matching flag.
pub fn extract_community(snapshot: &AuthorSnapshot) -> ([f64; 6], MissingFlags) {
    let mut flags = MissingFlags::default();
    let q = &snapshot.questions;
    let a = &snapshot.answers;
    if a.is_empty() {
        flags.no_prior_answers = true;
    }
    if q.is_empty() {
        flags.no_prior_questions = true;
    }
    let avg_answer_score = mean(a.iter().map(|p| p.score as f64)).unwrap_or(0.0);
    let avg_views = mean(q.iter().map(|p| p.views as f64)).unwrap_or(0.0);
    let avg_comments = mean(
        q.iter()
            .map(|p| p.comments as f64)
            .chain(a.iter().map(|p| p.comments as f64)),
    )
    .unwrap_or(0.0);
    let avg_favorites = mean(q.iter().map(|p| p.favorites as f64)).unwrap_or(0.0);
    let avg_question_score = mean(q.iter().map(|p| p.score as f64)).unwrap_or(0.0);
    let avg_accepted = mean(q.iter().map(|p| f64::from(p.accepted))).unwrap_or(0.0);
    (
        [
            avg_answer_score,
            avg_views,
            avg_comments,
            avg_favorites,
            avg_question_score,
            avg_accepted,
        ],
        flags,
    )
}

fn liwc_text(question: &PostRecord, stripped: &StrippedBody) -> String {
    match &question.title {
        Some(title) if !title.is_empty() => format!("{title} {}", stripped.text),
        _ => stripped.text.clone(),
    }
}

fn content_from_scores(
    question: &PostRecord,
    stripped: &StrippedBody,
    snapshot: &AuthorSnapshot,
    scores: &CategoryScores,
) -> [f64; 11] {
    let prev_tags = question
        .tags
        .iter()
        .filter(|t| snapshot.tags_used.contains(*t))
        .count() as f64;
    let code_length: usize = stripped.code_blocks.iter().map(|b| b.chars().count()).sum();
    [
        stripped.url_count as f64,
        prev_tags,
        code_length as f64,
        scores.get(CONTENT_CATEGORIES[0]),
        scores.get(CONTENT_CATEGORIES[1]),
        scores.get(CONTENT_CATEGORIES[2]),
        scores.get(CONTENT_CATEGORIES[3]),
        scores.get(CONTENT_CATEGORIES[4]),
        scores.get(CONTENT_CATEGORIES[5]),
        scores.get(CONTENT_CATEGORIES[6]),
        scores.get(CONTENT_CATEGORIES[7]),
    ]
}

/// Content features: URL count, tag reuse, code length, and the eight
/// content-category lexicon scores over title plus stripped body.
pub fn extract_content(
    question: &PostRecord,
    stripped: &StrippedBody,
    snapshot: &AuthorSnapshot,
    lexicon: &Lexicon,
) -> [f64; 11] {
    let scores = score_text(&liwc_text(question, stripped), lexicon);
    content_from_scores(question, stripped, snapshot, &scores)
}

fn syntactic_from_scores(
    question: &PostRecord,
    stripped: &StrippedBody,
    scores: &CategoryScores,
) -> ([f64; 18], MissingFlags) {
    let mut flags = MissingFlags::default();
    let body = &stripped.text;
    if body.is_empty() {
        flags.empty_body = true;
    }
    let title = question.title.as_deref().unwrap_or("");
    if title.is_empty() {
        flags.empty_title = true;
    }
    if scores.empty_text {
        flags.empty_text = true;
    }
    let bc = count_chars(body);
    let bw = word_stats(body);
    let tc = count_chars(title);
    let tw = word_stats(title);
    let values = [
        scores.get(SYNTACTIC_CATEGORIES[0]),
        scores.get(SYNTACTIC_CATEGORIES[1]),
        scores.get(SYNTACTIC_CATEGORIES[2]),
        bc.total as f64,
        bc.alpha as f64,
        bc.upper as f64,
        bc.lower as f64,
        bc.digit as f64,
        bc.whitespace as f64,
        bc.special as f64,
        bc.punct as f64,
        bw.words as f64,
        bw.short_words as f64,
        bw.unique_words as f64,
        bw.avg_word_length,
        tc.total as f64,
        tw.words as f64,
        tw.avg_word_length,
    ];
    (values, flags)
}

/// Syntactic features: fifteen character/word statistics over the stripped
/// body and title, plus the three syntactic-category lexicon scores.
pub fn extract_syntactic(
    question: &PostRecord,
    stripped: &StrippedBody,
    lexicon: &Lexicon,
) -> ([f64; 18], MissingFlags) {
    let scores = score_text(&liwc_text(question, stripped), lexicon);
    syntactic_from_scores(question, stripped, &scores)
}

fn merge(a: MissingFlags, b: MissingFlags) -> MissingFlags {
    MissingFlags {
        zero_age: a.zero_age || b.zero_age,
        no_prior_answers: a.no_prior_answers || b.no_prior_answers,
        no_prior_questions: a.no_prior_questions || b.no_prior_questions,
        empty_body: a.empty_body || b.empty_body,
        empty_title: a.empty_title || b.empty_title,
        empty_text: a.empty_text || b.empty_text,
    }
}

/// Composes the four extractors into one 47-field vector.
pub fn extract_all(
    question: &PostRecord,
    index: &AuthorIndex,
    lexicon: &Lexicon,
    label: Label,
) -> Result<FeatureVector, FeatureError> {
    let t = question.creation_date;
    let snapshot = index.snapshot(question.id, question.owner_user_id, t)?;
    let stripped = strip_html(&question.body);
    let scores = score_text(&liwc_text(question, &stripped), lexicon);

    let (profile, f1) = extract_profile(&snapshot, t);
    let (community, f2) = extract_community(&snapshot);
    let content = content_from_scores(question, &stripped, &snapshot, &scores);
    let (syntactic, f3) = syntactic_from_scores(question, &stripped, &scores);

    let mut values = [0.0; FEATURE_COUNT];
    values[..12].copy_from_slice(&profile);
    values[12..18].copy_from_slice(&community);
    values[18..29].copy_from_slice(&content);
    values[29..].copy_from_slice(&syntactic);
    debug_assert!(values.iter().all(|v| v.is_finite()));

    Ok(FeatureVector {
        question_id: question.id,
        label,
        values,
        flags: merge(merge(f1, f2), f3),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dump::{parse_timestamp, BadgeRecord, PostType, UserRecord};

    fn ts(s: &str) -> Timestamp {
        parse_timestamp(s).unwrap()
    }

    fn question(id: u64, owner: i64, created: &str, body: &str, title: &str, tags: &[&str]) -> PostRecord {
        PostRecord {
            id,
            post_type: PostType::Question,
            creation_date: ts(created),
            score: 0,
            view_count: None,
            body: body.to_string(),
            owner_user_id: Some(owner),
            title: Some(title.to_string()),
            tags: tags.iter().map(|t| t.to_string()).collect(),
            answer_count: None,
            comment_count: None,
            favorite_count: None,
            accepted_answer_id: None,
            parent_id: None,
        }
    }

    fn answer(id: u64, owner: i64, created: &str, score: i64) -> PostRecord {
        PostRecord {
            id,
            post_type: PostType::Answer,
            creation_date: ts(created),
            score,
            view_count: None,
            body: "a".into(),
            owner_user_id: Some(owner),
            title: None,
            tags: vec![],
            answer_count: None,
            comment_count: None,
            favorite_count: None,
            accepted_answer_id: None,
            parent_id: Some(1),
        }
    }

    fn fixture_index() -> AuthorIndex {
        let user = UserRecord {
            id: 10,
            creation_date: ts("2011-01-01T00:00:00"),
            reputation: 50,
            display_name: "u10".into(),
        };
        let mut q1 = question(100, 10, "2011-02-01T00:00:00", "<p>old</p>", "old q1", &["java", "android"]);
        q1.score = 2;
        q1.view_count = Some(10);
        q1.favorite_count = Some(1);
        q1.accepted_answer_id = Some(900);
        let mut q2 = question(101, 10, "2011-03-01T00:00:00", "<p>old</p>", "old q2", &["java"]);
        q2.score = 4;
        q2.view_count = Some(20);
        let posts = vec![
            q1,
            q2,
            answer(102, 10, "2011-03-15T00:00:00", -1),
            answer(103, 10, "2011-03-16T00:00:00", 0),
            answer(104, 10, "2011-03-17T00:00:00", 3),
            answer(105, 10, "2011-03-18T00:00:00", 3),
        ];
        let badges = vec![BadgeRecord {
            id: 1,
            user_id: 10,
            name: "b".into(),
            award_date: ts("2011-02-15T00:00:00"),
        }];
        AuthorIndex::build([user], posts, badges)
    }

    #[test]
    fn profile_hand_values() {
        let index = fixture_index();
        // 100 days after account creation.
        let t = ts("2011-04-11T00:00:00");
        let snap = index.snapshot(999, Some(10), t).unwrap();
        let (values, flags) = extract_profile(&snap, t);
        assert_eq!(values[0], 100.0);
        // Prior answers scores {-1, 0, 3, 3} -> neg 1, pos 2, zero 1.
        assert_eq!(values[4], 1.0);
        assert_eq!(values[5], 2.0);
        assert_eq!(values[6], 1.0);
        assert_eq!(values[7], 2.0); // prior questions
        assert_eq!(values[8], 4.0); // prior answers
        assert_eq!(values[9], 1.0); // badges
        assert!((values[10] - 0.02).abs() < 1e-12); // 2 questions / 100 days
        assert!((values[11] - 0.04).abs() < 1e-12);
        assert!(!flags.zero_age);
    }

    #[test]
    fn zero_age_ratio_flagged() {
        let index = fixture_index();
        let t = ts("2011-01-01T00:00:00"); // account created exactly now
        let snap = index.snapshot(999, Some(10), t).unwrap();
        let (values, flags) = extract_profile(&snap, t);
        assert_eq!(values[10], 0.0);
        assert!(flags.zero_age);
    }

    #[test]
    fn community_means() {
        let index = fixture_index();
        let snap = index.snapshot(999, Some(10), ts("2011-04-11T00:00:00")).unwrap();
        let (values, flags) = extract_community(&snap);
        assert!((values[0] - 1.25).abs() < 1e-12); // (-1+0+3+3)/4
        assert_eq!(values[1], 15.0); // (10+20)/2 views
        assert_eq!(values[3], 0.5); // favorites (1+0)/2
        assert_eq!(values[4], 3.0); // question scores (2+4)/2
        assert_eq!(values[5], 0.5); // one of two questions accepted
        assert!(!flags.no_prior_answers);
    }

    #[test]
    fn community_degenerate_flags() {
        let user = UserRecord {
            id: 1,
            creation_date: ts("2011-01-01T00:00:00"),
            reputation: 1,
            display_name: "x".into(),
        };
        let index = AuthorIndex::build([user], [], []);
        let snap = index.snapshot(1, Some(1), ts("2011-02-01T00:00:00")).unwrap();
        let (values, flags) = extract_community(&snap);
        assert!(values.iter().all(|&v| v == 0.0));
        assert!(flags.no_prior_answers && flags.no_prior_questions);
    }

    #[test]
    fn content_counts_previous_tags_and_code() {
        let index = fixture_index();
        let lexicon = Lexicon::starter();
        // Author previously used {java, android}; question tagged {android, xml}.
        let q = question(
            200,
            10,
            "2011-04-11T00:00:00",
            "<p>I need to see this q fast</p><pre><code>0123456789</code></pre><pre><code>01234</code></pre>",
            "help",
            &["android", "xml"],
        );
        let snap = index.snapshot(q.id, q.owner_user_id, q.creation_date).unwrap();
        let stripped = strip_html(&q.body);
        let values = extract_content(&q, &stripped, &snap, &lexicon);
        assert_eq!(values[0], 0.0); // urls
        assert_eq!(values[1], 1.0); // previous tags: android only
        assert_eq!(values[2], 15.0); // code length 10 + 5
        assert!(values[3] > 0.0, "personal pronoun score from 'I'");
    }

    #[test]
    fn syntactic_hand_counts() {
        let lexicon = Lexicon::starter();
        let q = question(201, 10, "2011-04-11T00:00:00", "<p>Hello World!</p>", "", &[]);
        let stripped = strip_html(&q.body);
        let (values, flags) = extract_syntactic(&q, &stripped, &lexicon);
        assert_eq!(values[3], 12.0); // chars
        assert_eq!(values[4], 10.0); // alpha
        assert_eq!(values[5], 2.0); // upper
        assert_eq!(values[6], 8.0); // lower
        assert_eq!(values[10], 1.0); // punctuation
        assert_eq!(values[11], 2.0); // words
        assert_eq!(values[13], 2.0); // unique
        assert_eq!(values[15], 0.0); // title chars
        assert_eq!(values[16], 0.0); // title words
        assert_eq!(values[17], 0.0); // avg title word length
        assert!(flags.empty_title);
    }

    #[test]
    fn extract_all_has_47_fields_and_is_deterministic() {
        let index = fixture_index();
        let lexicon = Lexicon::starter();
        let q = question(
            300,
            10,
            "2011-05-01T00:00:00",
            "<p>I know them, visit http://x.y now</p>",
            "a title",
            &["java"],
        );
        let v1 = extract_all(&q, &index, &lexicon, Label::Deleted).unwrap();
        let v2 = extract_all(&q, &index, &lexicon, Label::Deleted).unwrap();
        assert_eq!(v1, v2);
        assert_eq!(v1.values.len(), 47);
        assert!(v1.values.iter().all(|v| v.is_finite()));
        assert_eq!(v1.get("url_count"), Some(1.0));
        // Character partition invariant.
        let total = v1.get("body_chars").unwrap();
        let sum = v1.get("body_alpha_chars").unwrap()
            + v1.get("body_digit_chars").unwrap()
            + v1.get("body_whitespace_chars").unwrap()
            + v1.get("body_punct_chars").unwrap()
            + v1.get("body_special_chars").unwrap();
        assert_eq!(total, sum);
    }

    #[test]
    fn purity_records_at_or_after_t_do_not_matter() {
        let lexicon = Lexicon::starter();
        let q = question(300, 10, "2011-05-01T00:00:00", "<p>body</p>", "t", &["java"]);

        let base = extract_all(&q, &fixture_index(), &lexicon, Label::Unlabeled).unwrap();

        // Same index plus records dated at/after the question's creation.
        let user = UserRecord {
            id: 10,
            creation_date: ts("2011-01-01T00:00:00"),
            reputation: 50,
            display_name: "u10".into(),
        };
        let mut posts = vec![
            question(100, 10, "2011-02-01T00:00:00", "<p>old</p>", "old q1", &["java", "android"]),
            question(101, 10, "2011-03-01T00:00:00", "<p>old</p>", "old q2", &["java"]),
            answer(102, 10, "2011-03-15T00:00:00", -1),
            answer(103, 10, "2011-03-16T00:00:00", 0),
            answer(104, 10, "2011-03-17T00:00:00", 3),
            answer(105, 10, "2011-03-18T00:00:00", 3),
        ];
        posts[0].score = 2;
        posts[0].view_count = Some(10);
        posts[0].favorite_count = Some(1);
        posts[0].accepted_answer_id = Some(900);
        posts[1].score = 4;
        posts[1].view_count = Some(20);
        // Contamination: a post at exactly t, one after t, a later badge.
        posts.push(question(400, 10, "2011-05-01T00:00:00", "<p>same instant</p>", "x", &["zzz"]));
        posts.push(answer(401, 10, "2012-01-01T00:00:00", 99));
        let badges = vec![
            BadgeRecord {
                id: 1,
                user_id: 10,
                name: "b".into(),
                award_date: ts("2011-02-15T00:00:00"),
            },
            BadgeRecord {
                id: 2,
                user_id: 10,
                name: "later".into(),
                award_date: ts("2011-06-01T00:00:00"),
            },
        ];
        let contaminated = AuthorIndex::build([user], posts, badges);
        let after = extract_all(&q, &contaminated, &lexicon, Label::Unlabeled).unwrap();
        assert_eq!(base.values, after.values);
    }
}
