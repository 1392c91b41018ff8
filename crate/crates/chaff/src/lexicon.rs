//! Category-lexicon scoring of text (percentage-of-words per category).
//!
//! A lexicon maps category names to word entries; an entry is either a
//! literal word or a prefix stem marked by a trailing `*`. Scoring a text
//! yields, per category, `100 × matching tokens / total tokens`. A token may
//! match several categories at once (dictionaries are hierarchical: "i" is
//! both a personal pronoun and a pronoun).
//!
//! The on-disk format is the percent-delimited dictionary format:
//!
//! ```text
//! %
//! 1<TAB>ppron
//! 2<TAB>pronoun
//! %
//! i<TAB>1<TAB>2
//! know*<TAB>2
//! ```
//!
//! The crate ships a small open starter dictionary ([`Lexicon::starter`])
//! covering the eleven categories the feature extractor consumes; a real
//! dictionary file in the same format can be dropped in instead.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("line {line}: {reason}")]
    Format { line: usize, reason: String },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

fn format_err(line: usize, reason: impl Into<String>) -> LexiconError {
    LexiconError::Format {
        line,
        reason: reason.into(),
    }
}

/// An immutable, loaded category dictionary.
#[derive(Debug, Clone)]
pub struct Lexicon {
    /// Category names in id order.
    categories: Vec<String>,
    /// Literal word -> indices of matching categories.
    words: HashMap<String, Vec<u16>>,
    /// Stem (without the `*`) -> indices of matching categories.
    stems: HashMap<String, Vec<u16>>,
}

impl Lexicon {
    /// Parses a dictionary in the percent-delimited format.
    pub fn parse(input: &str) -> Result<Self, LexiconError> {
        let mut id_to_index: BTreeMap<u32, u16> = BTreeMap::new();
        let mut categories: Vec<String> = Vec::new();
        let mut seen_names: BTreeSet<String> = BTreeSet::new();
        let mut words: HashMap<String, Vec<u16>> = HashMap::new();
        let mut stems: HashMap<String, Vec<u16>> = HashMap::new();

        let mut percent_seen = 0u8;
        let mut any_entry = false;

        for (idx, raw_line) in input.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw_line.trim_end_matches('\r');
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            if trimmed == "%" {
                percent_seen += 1;
                if percent_seen > 2 {
                    return Err(format_err(line_no, "more than two `%` delimiters"));
                }
                continue;
            }
            match percent_seen {
                0 => return Err(format_err(line_no, "content before the first `%` delimiter")),
                1 => {
                    // Header: numeric id, whitespace, category name.
                    let mut parts = trimmed.split_whitespace();
                    let id: u32 = parts
                        .next()
                        .unwrap()
                        .parse()
                        .map_err(|_| format_err(line_no, "category id is not a number"))?;
                    let name = parts
                        .next()
                        .ok_or_else(|| format_err(line_no, "missing category name"))?
                        .to_lowercase();
                    if parts.next().is_some() {
                        return Err(format_err(line_no, "trailing content after category name"));
                    }
                    if !seen_names.insert(name.clone()) {
                        return Err(format_err(line_no, format!("duplicate category `{name}`")));
                    }
                    if id_to_index.contains_key(&id) {
                        return Err(format_err(line_no, format!("duplicate category id {id}")));
                    }
                    id_to_index.insert(id, categories.len() as u16);
                    categories.push(name);
                }
                _ => {
                    // Entry: word or stem, then one or more category ids.
                    let mut parts = trimmed.split_whitespace();
                    let entry = parts.next().unwrap().to_lowercase();
                    let mut cat_indices = Vec::new();
                    for p in parts {
                        let id: u32 = p.parse().map_err(|_| {
                            format_err(line_no, format!("category id `{p}` is not a number"))
                        })?;
                        let index = *id_to_index.get(&id).ok_or_else(|| {
                            format_err(line_no, format!("unknown category id {id}"))
                        })?;
                        cat_indices.push(index);
                    }
                    if cat_indices.is_empty() {
                        return Err(format_err(line_no, "entry lists no categories"));
                    }
                    any_entry = true;
                    let (target, key) = match entry.strip_suffix('*') {
                        Some(stem) => {
                            if stem.is_empty() {
                                return Err(format_err(line_no, "empty stem before `*`"));
                            }
                            (&mut stems, stem.to_owned())
                        }
                        None => (&mut words, entry),
                    };
                    let slot = target.entry(key).or_default();
                    for c in cat_indices {
                        if !slot.contains(&c) {
                            slot.push(c);
                        }
                    }
                }
            }
        }

        if categories.is_empty() {
            return Err(format_err(0, "dictionary defines no categories"));
        }
        if !any_entry {
            return Err(format_err(0, "dictionary defines no entries"));
        }
        for slot in words.values_mut().chain(stems.values_mut()) {
            slot.sort_unstable();
        }
        Ok(Lexicon {
            categories,
            words,
            stems,
        })
    }

    /// Loads a dictionary file.
    pub fn load(path: &Path) -> Result<Self, LexiconError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// The bundled starter dictionary.
    pub fn starter() -> Self {
        Self::parse(STARTER_DICTIONARY).expect("bundled dictionary is well-formed")
    }

    /// The raw text of the bundled starter dictionary, for writing to disk.
    pub fn starter_source() -> &'static str {
        STARTER_DICTIONARY
    }

    pub fn category_names(&self) -> impl Iterator<Item = &str> {
        self.categories.iter().map(String::as_str)
    }

    pub fn category_count(&self) -> usize {
        self.categories.len()
    }

    pub fn has_category(&self, name: &str) -> bool {
        self.categories.iter().any(|c| c == name)
    }

    /// Entry count (words plus stems) per category, in id order.
    pub fn entry_counts(&self) -> Vec<(String, usize)> {
        let mut counts = vec![0usize; self.categories.len()];
        for cats in self.words.values().chain(self.stems.values()) {
            for &c in cats {
                counts[c as usize] += 1;
            }
        }
        self.categories
            .iter()
            .cloned()
            .zip(counts)
            .collect()
    }

    /// Category indices matched by one token.
    fn matches_of(&self, token: &str, hit: &mut [bool]) {
        if let Some(cats) = self.words.get(token) {
            for &c in cats {
                hit[c as usize] = true;
            }
        }
        // A stem matches when it is a prefix of the token; probe every
        // prefix of the token against the stem table.
        for (end, _) in token.char_indices().skip(1) {
            if let Some(cats) = self.stems.get(&token[..end]) {
                for &c in cats {
                    hit[c as usize] = true;
                }
            }
        }
        if let Some(cats) = self.stems.get(token) {
            for &c in cats {
                hit[c as usize] = true;
            }
        }
    }
}

/// Per-category percentage scores for one text.
#[derive(Debug, Clone, PartialEq)]
pub struct CategoryScores {
    scores: BTreeMap<String, f64>,
    pub token_count: usize,
    /// Set when the text had no tokens; all scores are then zero.
    pub empty_text: bool,
}

impl CategoryScores {
    /// Score for a category; 0 for categories absent from the lexicon.
    pub fn get(&self, category: &str) -> f64 {
        self.scores.get(category).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.scores.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

/// Splits plain text into lowercase word tokens.
///
/// Tokens are maximal runs of letters and apostrophes; digits and
/// punctuation separate tokens. Leading and trailing apostrophes are
/// trimmed, so quoting does not mint new tokens ("don't" survives intact).
pub fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    for ch in text.chars() {
        if ch.is_alphabetic() || ch == '\'' {
            for lc in ch.to_lowercase() {
                current.push(lc);
            }
        } else if !current.is_empty() {
            push_token(&mut tokens, &mut current);
        }
    }
    if !current.is_empty() {
        push_token(&mut tokens, &mut current);
    }
    tokens
}

fn push_token(tokens: &mut Vec<String>, current: &mut String) {
    let trimmed = current.trim_matches('\'');
    if !trimmed.is_empty() {
        tokens.push(trimmed.to_owned());
    }
    current.clear();
}

/// Scores tokens against a lexicon: per category,
/// `100 × matching tokens / total tokens`.
pub fn score(tokens: &[String], lexicon: &Lexicon) -> CategoryScores {
    let n_categories = lexicon.category_count();
    let mut counts = vec![0u64; n_categories];
    let mut hit = vec![false; n_categories];
    for token in tokens {
        hit.fill(false);
        lexicon.matches_of(token, &mut hit);
        for (c, &h) in hit.iter().enumerate() {
            if h {
                counts[c] += 1;
            }
        }
    }
    let total = tokens.len();
    let scores = lexicon
        .categories
        .iter()
        .enumerate()
        .map(|(c, name)| {
            let pct = if total == 0 {
                0.0
            } else {
                100.0 * counts[c] as f64 / total as f64
            };
            (name.clone(), pct)
        })
        .collect();
    CategoryScores {
        scores,
        token_count: total,
        empty_text: total == 0,
    }
}

/// Convenience: tokenize then score.
pub fn score_text(text: &str, lexicon: &Lexicon) -> CategoryScores {
    score(&tokenize(text), lexicon)
}

/// Renders a lexicon description line for logs.
pub fn describe(lexicon: &Lexicon) -> String {
    let mut out = String::new();
    let _ = write!(out, "{} categories:", lexicon.category_count());
    for (name, count) in lexicon.entry_counts() {
        let _ = write!(out, " {name}({count})");
    }
    out
}

const STARTER_DICTIONARY: &str = include_str!("../data/starter_lexicon.dic");
