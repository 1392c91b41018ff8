//! Community-value quality indicators for a question class.

use std::collections::BTreeSet;

use crate::dump::{strip_html, PostRecord};

/// Quality indicators over one class of questions (e.g. deleted, closed).
///
/// `pac` and `cz` are conditional fractions and stay `None` when their
/// denominators are empty (no answered questions / no comments).
#[derive(Debug, Clone, PartialEq)]
pub struct QualityIndicators {
    pub question_count: u64,
    /// Fraction with zero score.
    pub qz: f64,
    /// Fraction with score greater than zero.
    pub qgz: f64,
    /// Fraction with at least one answer.
    pub pa: f64,
    /// Fraction with an accepted answer.
    pub paa: f64,
    /// Fraction with an accepted answer among questions with any answer.
    pub pac: Option<f64>,
    /// Fraction of the class's comments that have zero score.
    pub cz: Option<f64>,
    /// Fraction with at least one favorite vote.
    pub favorited: f64,
    /// Fraction with at least one view.
    pub viewed: f64,
    /// Fraction whose body contains at least one code block.
    pub with_code: f64,
    /// Mean plain-text body length in characters.
    pub mean_body_chars: f64,
}

/// Computes the indicators for one class of question records.
///
/// `answer_parents` are the parent question ids of the class's answers (one
/// element per answer); `comment_scores` are the scores of comments on the
/// class's questions.
pub fn quality_indicators(
    questions: &[PostRecord],
    answer_parents: impl IntoIterator<Item = u64>,
    comment_scores: impl IntoIterator<Item = i64>,
) -> QualityIndicators {
    let answered: BTreeSet<u64> = answer_parents.into_iter().collect();
    let n = questions.len() as u64;
    let frac = |count: u64| {
        if n == 0 {
            0.0
        } else {
            count as f64 / n as f64
        }
    };

    let mut zero_score = 0;
    let mut pos_score = 0;
    let mut has_answer = 0;
    let mut has_accepted = 0;
    let mut accepted_and_answered = 0;
    let mut favorited = 0;
    let mut viewed = 0;
    let mut with_code = 0;
    let mut body_chars_total = 0u64;
    for q in questions {
        if q.score == 0 {
            zero_score += 1;
        } else if q.score > 0 {
            pos_score += 1;
        }
        let answered_q = answered.contains(&q.id) || q.answer_count.unwrap_or(0) > 0;
        if answered_q {
            has_answer += 1;
        }
        if q.accepted_answer_id.is_some() {
            has_accepted += 1;
            if answered_q {
                accepted_and_answered += 1;
            }
        }
        if q.favorite_count.unwrap_or(0) > 0 {
            favorited += 1;
        }
        if q.view_count.unwrap_or(0) > 0 {
            viewed += 1;
        }
        let stripped = strip_html(&q.body);
        if !stripped.code_blocks.is_empty() {
            with_code += 1;
        }
        body_chars_total += stripped.text.chars().count() as u64;
    }

    let mut comment_total = 0u64;
    let mut comment_zero = 0u64;
    for score in comment_scores {
        comment_total += 1;
        if score == 0 {
            comment_zero += 1;
        }
    }

    QualityIndicators {
        question_count: n,
        qz: frac(zero_score),
        qgz: frac(pos_score),
        pa: frac(has_answer),
        paa: frac(has_accepted),
        pac: if has_answer == 0 {
            None
        } else {
            Some(accepted_and_answered as f64 / has_answer as f64)
        },
        cz: if comment_total == 0 {
            None
        } else {
            Some(comment_zero as f64 / comment_total as f64)
        },
        favorited: frac(favorited),
        viewed: frac(viewed),
        with_code: frac(with_code),
        mean_body_chars: if n == 0 {
            0.0
        } else {
            body_chars_total as f64 / n as f64
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dump::{parse_timestamp, PostType};

    fn question(id: u64, score: i64) -> PostRecord {
        PostRecord {
            id,
            post_type: PostType::Question,
            creation_date: parse_timestamp("2011-01-01T00:00:00").unwrap(),
            score,
            view_count: None,
            body: "<p>ab</p>".into(),
            owner_user_id: Some(1),
            title: Some("t".into()),
            tags: vec![],
            answer_count: None,
            comment_count: None,
            favorite_count: None,
            accepted_answer_id: None,
            parent_id: None,
        }
    }

    #[test]
    fn qz_matches_hand_fraction() {
        let questions: Vec<PostRecord> = (1..=10)
            .map(|id| question(id, if id <= 8 { 0 } else { 1 }))
            .collect();
        let q = quality_indicators(&questions, [], []);
        assert_eq!(q.qz, 0.8);
        assert_eq!(q.qgz, 0.2);
    }

    #[test]
    fn degenerate_no_answers() {
        let questions = vec![question(1, 0), question(2, -1)];
        let q = quality_indicators(&questions, [], []);
        assert_eq!(q.pa, 0.0);
        assert_eq!(q.pac, None);
        assert_eq!(q.cz, None);
    }

    #[test]
    fn all_indicators_match_counting_oracle() {
        let mut questions = Vec::new();
        for id in 1..=20u64 {
            let mut q = question(id, (id % 3) as i64 - 1); // scores -1, 0, 1
            q.view_count = Some(if id % 2 == 0 { 3 } else { 0 });
            q.favorite_count = Some(u64::from(id % 5 == 0));
            if id % 4 == 0 {
                q.accepted_answer_id = Some(1000 + id);
            }
            if id % 6 == 0 {
                q.body = "<p>ab</p><pre><code>zz</code></pre>".into();
            }
            questions.push(q);
        }
        // Answers on questions 4, 8, 12, 16, 20 (so every accepted one is answered).
        let answers: Vec<u64> = (1..=20).filter(|id| id % 4 == 0).collect();
        let comments = [0i64, 0, 1, -1, 0];
        let q = quality_indicators(&questions, answers.iter().copied(), comments.iter().copied());

        // Independent recount.
        let zero = questions.iter().filter(|p| p.score == 0).count() as f64;
        let gz = questions.iter().filter(|p| p.score > 0).count() as f64;
        assert_eq!(q.qz, zero / 20.0);
        assert_eq!(q.qgz, gz / 20.0);
        assert_eq!(q.pa, 5.0 / 20.0);
        assert_eq!(q.paa, 5.0 / 20.0);
        assert_eq!(q.pac, Some(1.0));
        assert_eq!(q.cz, Some(3.0 / 5.0));
        assert_eq!(q.favorited, 4.0 / 20.0);
        assert_eq!(q.viewed, 10.0 / 20.0);
        assert_eq!(q.with_code, 3.0 / 20.0);
        assert!(q.pac >= Some(q.paa), "PAC >= PAA whenever PA > 0");
        let mean = questions
            .iter()
            .map(|p| strip_html(&p.body).text.chars().count() as f64)
            .sum::<f64>()
            / 20.0;
        assert_eq!(q.mean_body_chars, mean);
    }

    #[test]
    fn empty_class_is_all_zero() {
        let q = quality_indicators(&[], [], []);
        assert_eq!(q.question_count, 0);
        assert_eq!(q.qz, 0.0);
        assert_eq!(q.mean_body_chars, 0.0);
    }
}
