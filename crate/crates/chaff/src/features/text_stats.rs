//! Character and word statistics over plain text.

use std::collections::BTreeSet;

/// The conventional terminal/separator punctuation set. Everything else
/// that is neither alphanumeric nor whitespace counts as "special", which
/// makes the character-class partition exact:
/// `alpha + digit + whitespace + punct + special = total`.
pub const PUNCTUATION: [char; 15] = [
    '.', ',', ';', ':', '!', '?', '\'', '"', '(', ')', '[', ']', '{', '}', '-',
];

/// Character-class counts for one text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CharCounts {
    pub total: u64,
    pub alpha: u64,
    pub upper: u64,
    pub lower: u64,
    pub digit: u64,
    pub whitespace: u64,
    pub punct: u64,
    pub special: u64,
}

/// Counts character classes. `upper` and `lower` are subsets of `alpha`
/// (caseless scripts count as alphabetic only).
pub fn count_chars(text: &str) -> CharCounts {
    let mut counts = CharCounts::default();
    for ch in text.chars() {
        counts.total += 1;
        if ch.is_alphabetic() {
            counts.alpha += 1;
            if ch.is_uppercase() {
                counts.upper += 1;
            } else if ch.is_lowercase() {
                counts.lower += 1;
            }
        } else if ch.is_numeric() {
            counts.digit += 1;
        } else if ch.is_whitespace() {
            counts.whitespace += 1;
        } else if PUNCTUATION.contains(&ch) {
            counts.punct += 1;
        } else {
            counts.special += 1;
        }
    }
    counts
}

/// Word-level statistics for one text. Words are whitespace-separated
/// runs; lengths are in characters.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct WordStats {
    pub words: u64,
    /// Words shorter than four characters.
    pub short_words: u64,
    /// Distinct words, compared case-insensitively.
    pub unique_words: u64,
    /// Mean word length; 0 for empty text.
    pub avg_word_length: f64,
}

pub fn word_stats(text: &str) -> WordStats {
    let mut words = 0u64;
    let mut short_words = 0u64;
    let mut total_len = 0u64;
    let mut seen: BTreeSet<String> = BTreeSet::new();
    for word in text.split_whitespace() {
        let len = word.chars().count() as u64;
        words += 1;
        total_len += len;
        if len < 4 {
            short_words += 1;
        }
        seen.insert(word.to_lowercase());
    }
    WordStats {
        words,
        short_words,
        unique_words: seen.len() as u64,
        avg_word_length: if words == 0 {
            0.0
        } else {
            total_len as f64 / words as f64
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hello_world_hand_count() {
        let c = count_chars("Hello World!");
        assert_eq!(c.total, 12);
        assert_eq!(c.alpha, 10);
        assert_eq!(c.upper, 2);
        assert_eq!(c.lower, 8);
        assert_eq!(c.punct, 1);
        assert_eq!(c.whitespace, 1);
        assert_eq!(c.digit, 0);
        assert_eq!(c.special, 0);
        let w = word_stats("Hello World!");
        assert_eq!(w.words, 2);
        assert_eq!(w.unique_words, 2);
    }

    #[test]
    fn short_words_under_stated_threshold() {
        let w = word_stats("a bb ccc dddd");
        assert_eq!(w.words, 4);
        assert_eq!(w.short_words, 3);
        assert_eq!(w.unique_words, 4);
        assert!((w.avg_word_length - 10.0 / 4.0).abs() < 1e-12);
    }

    #[test]
    fn empty_text_degenerate() {
        assert_eq!(count_chars(""), CharCounts::default());
        let w = word_stats("");
        assert_eq!(w.words, 0);
        assert_eq!(w.avg_word_length, 0.0);
    }

    #[test]
    fn unique_is_case_insensitive() {
        let w = word_stats("Ab ab AB cd");
        assert_eq!(w.unique_words, 2);
    }

    #[test]
    fn partition_holds_on_mixed_text() {
        for text in [
            "x = 1; // ok?",
            "café 3.14 \u{2603} tabs\tand\nnewlines",
            "ALL CAPS and 123 #$%^",
            "",
        ] {
            let c = count_chars(text);
            assert_eq!(
                c.alpha + c.digit + c.whitespace + c.punct + c.special,
                c.total,
                "partition failed for {text:?}"
            );
        }
    }

    #[test]
    fn bounds_words() {
        let w = word_stats("one two two THREE three");
        assert!(w.unique_words <= w.words);
        assert!(w.short_words <= w.words);
    }
}
