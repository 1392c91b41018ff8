//! Creation-time feature extraction.
//!
//! Each question yields 47 numeric features in four groups:
//!
//! * profile (12): account age and prior-contribution counts,
//! * community (6): averages over the author's prior posts,
//! * content (11): URLs, tag reuse, code length, eight lexicon scores,
//! * syntactic (18): character/word statistics plus three lexicon scores.
//!
//! Extraction is creation-time pure: only records dated strictly before the
//! question's creation (plus the question's own text and metadata) influence
//! the vector. The column order below is part of the feature-matrix file
//! contract and of model compatibility.

mod author;
mod extract;
mod matrix;
mod text_stats;

pub use author::{author_snapshot, AuthorIndex, AuthorSnapshot, PriorAnswer, PriorQuestion};
pub use extract::{
    extract_all, extract_community, extract_content, extract_profile, extract_syntactic,
    validate_lexicon,
};
pub use matrix::{matrix_columns, read_matrix, write_matrix};
pub use text_stats::{count_chars, word_stats, CharCounts, WordStats, PUNCTUATION};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error("question {question_id} has no usable author (user {user_id:?})")]
    UnknownUser {
        question_id: u64,
        user_id: Option<i64>,
    },
    #[error("lexicon lacks required categories: {0:?}")]
    MissingCategories(Vec<String>),
    #[error("feature matrix {path}: {reason}")]
    BadMatrix { path: String, reason: String },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub const FEATURE_COUNT: usize = 47;

/// The four feature groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FeatureSet {
    /// Profile.
    A,
    /// Community.
    B,
    /// Content.
    C,
    /// Syntactic.
    D,
}

impl FeatureSet {
    pub fn as_str(self) -> &'static str {
        match self {
            FeatureSet::A => "A",
            FeatureSet::B => "B",
            FeatureSet::C => "C",
            FeatureSet::D => "D",
        }
    }
}

impl std::str::FromStr for FeatureSet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" | "SA" | "S_A" => Ok(FeatureSet::A),
            "B" | "SB" | "S_B" => Ok(FeatureSet::B),
            "C" | "SC" | "S_C" => Ok(FeatureSet::C),
            "D" | "SD" | "S_D" => Ok(FeatureSet::D),
            other => Err(format!("unknown feature set `{other}`")),
        }
    }
}

/// Column names in matrix order, grouped A, B, C, D.
pub const FEATURE_NAMES: [&str; FEATURE_COUNT] = [
    // Profile (12)
    "age_of_account_days",
    "prev_questions_neg_score",
    "prev_questions_pos_score",
    "prev_questions_zero_score",
    "prev_answers_neg_score",
    "prev_answers_pos_score",
    "prev_answers_zero_score",
    "prev_questions",
    "prev_answers",
    "prev_badges",
    "questions_per_day",
    "answers_per_day",
    // Community (6)
    "avg_prev_answer_score",
    "avg_prev_question_views",
    "avg_prev_comment_count",
    "avg_prev_favorites",
    "avg_prev_question_score",
    "avg_prev_accepted_answers",
    // Content (11)
    "url_count",
    "prev_tags",
    "code_length",
    "liwc_ppron",
    "liwc_pronoun",
    "liwc_space",
    "liwc_relativ",
    "liwc_incl",
    "liwc_cogmech",
    "liwc_social",
    "liwc_i",
    // Syntactic (18)
    "liwc_funct",
    "liwc_conj",
    "liwc_preps",
    "body_chars",
    "body_alpha_chars",
    "body_upper_chars",
    "body_lower_chars",
    "body_digit_chars",
    "body_whitespace_chars",
    "body_special_chars",
    "body_punct_chars",
    "body_words",
    "body_short_words",
    "body_unique_words",
    "body_avg_word_length",
    "title_chars",
    "title_words",
    "title_avg_word_length",
];

/// Group membership per column, aligned with [`FEATURE_NAMES`].
pub const FEATURE_SETS: [FeatureSet; FEATURE_COUNT] = {
    let mut sets = [FeatureSet::A; FEATURE_COUNT];
    let mut i = 12;
    while i < 18 {
        sets[i] = FeatureSet::B;
        i += 1;
    }
    while i < 29 {
        sets[i] = FeatureSet::C;
        i += 1;
    }
    while i < 47 {
        sets[i] = FeatureSet::D;
        i += 1;
    }
    sets
};

/// Column indices belonging to any of the given sets, in matrix order.
pub fn feature_indices(sets: &[FeatureSet]) -> Vec<usize> {
    FEATURE_SETS
        .iter()
        .enumerate()
        .filter(|(_, s)| sets.contains(s))
        .map(|(i, _)| i)
        .collect()
}

/// Index of a feature by name.
pub fn feature_index(name: &str) -> Option<usize> {
    FEATURE_NAMES.iter().position(|n| *n == name)
}

/// Class label carried alongside a vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Label {
    Deleted,
    NonDeleted,
    Unlabeled,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Deleted => "deleted",
            Label::NonDeleted => "non_deleted",
            Label::Unlabeled => "unlabeled",
        }
    }
}

impl std::str::FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "deleted" => Ok(Label::Deleted),
            "non_deleted" => Ok(Label::NonDeleted),
            "unlabeled" => Ok(Label::Unlabeled),
            other => Err(format!("unknown label `{other}`")),
        }
    }
}

/// Degenerate-denominator markers. Auxiliary only: not part of the
/// 47-feature contract and not serialized into the matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct MissingFlags {
    /// Account age was zero; per-day ratios were forced to 0.
    pub zero_age: bool,
    /// No prior answers; answer-score average forced to 0.
    pub no_prior_answers: bool,
    /// No prior questions; question averages forced to 0.
    pub no_prior_questions: bool,
    /// Empty body text after markup stripping.
    pub empty_body: bool,
    /// Missing or empty title.
    pub empty_title: bool,
    /// No tokens for lexicon scoring.
    pub empty_text: bool,
}

/// One question's features.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    pub question_id: u64,
    pub label: Label,
    pub values: [f64; FEATURE_COUNT],
    pub flags: MissingFlags,
}

impl FeatureVector {
    pub fn get(&self, name: &str) -> Option<f64> {
        feature_index(name).map(|i| self.values[i])
    }
}
