//! Synthetic dump-corpus generator with known ground truth.
//!
//! Builds a miniature site history as three snapshot directories in the
//! real dump format, plus exclusion/initiator sidecars and a lexicon file.
//! The generator returns every planted fact, so tests can recount any
//! report from truth and compare against the pipeline's output.
//!
//! The class signal is planted deliberately:
//!
//! * profile columns separate the classes (deleted questions come from
//!   young accounts, kept ones from old accounts, with disjoint age ranges,
//!   so a perfect ranking exists by construction);
//! * syntactic columns separate them too (short versus long bodies, again
//!   disjoint);
//! * community and content columns are constant across all questions
//!   (identical prior-post statistics, identical code block, no URLs,
//!   bodies drawn from words outside the bundled lexicon), so tiers
//!   restricted to them cannot beat chance.
//!
//! Each author's prior activity is two answers to a single shared hub
//! question. Answers never enter the feature matrix, and the hub question
//! carries no owner (so the missing-author rule excludes it), keeping the
//! negative pool exactly the kept main questions.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use chrono::{Duration, NaiveDate};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dump::{HistoryType, Timestamp};
use crate::lexicon::Lexicon;
use crate::snapshot::Initiator;

#[derive(Debug, Clone)]
pub struct SynthConfig {
    pub questions: usize,
    pub deleted_fraction: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            questions: 2000,
            deleted_fraction: 0.35,
            seed: 7,
        }
    }
}

/// Every fact planted for one question.
#[derive(Debug, Clone)]
pub struct TruthQuestion {
    pub id: u64,
    pub owner: i64,
    /// Written without an owner attribute (excluded from feature rows).
    pub ownerless: bool,
    pub created: Timestamp,
    /// True corpus member: absent from the latest snapshot by deletion.
    pub deleted: bool,
    /// Absent from the latest snapshot but listed in the exclusion file.
    pub wrongly_captured: bool,
    /// Annotation written to the initiator sidecar (deleted and
    /// undeleted-kept questions).
    pub initiator: Option<Initiator>,
    /// Snapshot index (into `SynthCorpus::snapshots`) this question last
    /// appears in before vanishing; `None` for questions in the latest.
    pub provenance: Option<usize>,
    pub score: i64,
    pub views: u64,
    pub favorites: u64,
    pub answer_ids: Vec<u64>,
    pub accepted_answer: Option<u64>,
    pub comment_scores: Vec<i64>,
    pub tags: Vec<String>,
    pub body_words: usize,
    /// The body's prose text (markup and code excluded).
    pub body_prose: String,
    /// When the question stops appearing in snapshots.
    pub vanish_time: Option<Timestamp>,
    /// Whether a post-deleted history event is written at `vanish_time`.
    pub deletion_event: bool,
    pub delete_vote_dates: Vec<NaiveDate>,
    /// A deliberately buggy deletion vote predating the question.
    pub negative_vote: bool,
    pub edit_types: Vec<HistoryType>,
    /// Close event: time and the raw reason text written to the dump.
    pub close: Option<(Timestamp, String)>,
    /// Delete/undelete event pair on a kept question.
    pub undelete: Option<(Timestamp, Timestamp)>,
}

/// The generated corpus: directory layout plus full ground truth.
#[derive(Debug, Clone)]
pub struct SynthCorpus {
    pub dir: PathBuf,
    /// `(snapshot id, date, directory)`, oldest first; the last is latest.
    pub snapshots: Vec<(String, NaiveDate, PathBuf)>,
    pub questions: Vec<TruthQuestion>,
    pub account_created: BTreeMap<i64, Timestamp>,
    /// Every author's prior activity: this many answers to the hub question.
    pub prior_answers_per_author: u64,
    /// The shared owner-less question all prior answers attach to.
    pub hub_question_id: u64,
    pub hub_created: Timestamp,
    pub exclusions_file: PathBuf,
    pub initiators_file: PathBuf,
    pub lexicon_file: PathBuf,
}

impl SynthCorpus {
    pub fn latest(&self) -> &(String, NaiveDate, PathBuf) {
        self.snapshots.last().expect("snapshots are non-empty")
    }

    /// Ids of the final deleted-question corpus.
    pub fn deleted_ids(&self) -> Vec<u64> {
        self.questions
            .iter()
            .filter(|q| q.deleted)
            .map(|q| q.id)
            .collect()
    }

    /// Ids of questions present in the latest snapshot (the negative pool).
    pub fn kept_ids(&self) -> Vec<u64> {
        self.questions
            .iter()
            .filter(|q| q.vanish_time.is_none())
            .map(|q| q.id)
            .collect()
    }
}

/// Words guaranteed to match nothing in the bundled lexicon (checked by a
/// test below), so lexicon feature columns stay at exactly zero.
const NONSENSE: [&str; 24] = [
    "zorp", "blik", "quix", "vemb", "drath", "plonk", "crin", "smeck", "womp", "jorv", "trell",
    "fyst", "glom", "prax", "nuzz", "clave", "brix", "yurt", "velch", "dask", "morv", "quell",
    "zint", "harp",
];

const COMMON_TAG: &str = "alpha";
const CODE_SNIPPET: &str = "x = 1;";

fn ts(date: NaiveDate) -> Timestamp {
    date.and_hms_opt(0, 0, 0).expect("midnight is valid")
}

fn fmt_ts(t: Timestamp) -> String {
    t.format("%Y-%m-%dT%H:%M:%S%.3f").to_string()
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(ch),
        }
    }
    out
}

struct RowWriter {
    content: String,
    root: &'static str,
}

impl RowWriter {
    fn new(root: &'static str) -> Self {
        let mut content = String::from("<?xml version=\"1.0\" encoding=\"utf-8\"?>\n");
        let _ = writeln!(content, "<{root}>");
        RowWriter { content, root }
    }

    fn row(&mut self, attrs: &[(&str, String)]) {
        self.content.push_str("  <row");
        for (key, value) in attrs {
            let _ = write!(self.content, " {key}=\"{}\"", xml_escape(value));
        }
        self.content.push_str(" />\n");
    }

    fn finish(mut self) -> String {
        let _ = writeln!(self.content, "</{}>", self.root);
        self.content
    }
}

fn nonsense_words(rng: &mut ChaCha8Rng, count: usize) -> String {
    let mut words = Vec::with_capacity(count);
    for _ in 0..count {
        words.push(*NONSENSE.choose(rng).expect("non-empty"));
    }
    words.join(" ")
}

struct PostRow {
    id: u64,
    type_id: u8,
    created: Timestamp,
    score: i64,
    views: Option<u64>,
    body: String,
    owner: Option<i64>,
    title: Option<String>,
    tags: Vec<String>,
    answer_count: Option<u64>,
    comment_count: Option<u64>,
    favorite_count: Option<u64>,
    accepted: Option<u64>,
    parent: Option<u64>,
    /// When the post stops appearing in snapshots.
    vanish: Option<Timestamp>,
}

/// Generates the corpus under `dir`.
pub fn generate(dir: &Path, config: &SynthConfig) -> std::io::Result<SynthCorpus> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let snapshot_dates = [
        NaiveDate::from_ymd_opt(2011, 9, 1).unwrap(),
        NaiveDate::from_ymd_opt(2012, 6, 1).unwrap(),
        NaiveDate::from_ymd_opt(2013, 3, 1).unwrap(),
    ];
    let creation_start = NaiveDate::from_ymd_opt(2011, 1, 1).unwrap();
    let creation_end = NaiveDate::from_ymd_opt(2012, 5, 30).unwrap(); // before snapshot 2

    let n = config.questions;
    let n_deleted = (config.deleted_fraction * n as f64).round() as usize;
    let n_wrong = (n / 100).clamp(2, 40); // excluded "wrongly captured" rows
    let mut classes: Vec<u8> = Vec::with_capacity(n);
    classes.extend(std::iter::repeat_n(1u8, n_deleted)); // deleted
    classes.extend(std::iter::repeat_n(2u8, n_wrong)); // wrongly captured
    classes.extend(std::iter::repeat_n(0u8, n - n_deleted - n_wrong)); // kept
    classes.shuffle(&mut rng);

    let mut next_id: u64 = 1;
    let mut alloc = |count: u64| {
        let start = next_id;
        next_id += count;
        start
    };

    let mut questions = Vec::with_capacity(n);
    let mut account_created = BTreeMap::new();
    let mut posts: Vec<PostRow> = Vec::new();
    let mut votes = RowsBuf::default();
    let mut comments = RowsBuf::default();
    let mut history = RowsBuf::default();
    let mut badges = RowsBuf::default();
    let mut users = RowsBuf::default();
    let mut vote_id = 1u64;
    let mut comment_id = 1u64;
    let mut history_id = 1u64;
    let mut badge_id = 1u64;
    let mut negative_votes_planted = 0usize;
    let mut orphan_planted = false;

    // The shared hub question every prior answer attaches to. It carries no
    // owner, so it never becomes a feature row.
    let hub_id = alloc(1);
    let hub_created = ts(NaiveDate::from_ymd_opt(2010, 6, 1).unwrap()) + Duration::hours(12);
    {
        let mut hub_rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0xB0B);
        let hub_body = format!(
            "<p>{}</p><pre><code>{}</code></pre>",
            nonsense_words(&mut hub_rng, 80),
            CODE_SNIPPET
        );
        posts.push(PostRow {
            id: hub_id,
            type_id: 1,
            created: hub_created,
            score: 3,
            views: Some(50),
            body: hub_body,
            owner: None,
            title: Some("quell zint harp".into()),
            tags: vec![COMMON_TAG.to_string()],
            answer_count: Some(0),
            comment_count: Some(0),
            favorite_count: Some(0),
            accepted: None,
            parent: None,
            vanish: None,
        });
    }

    for (i, &class) in classes.iter().enumerate() {
        let owner = 100_000 + i as i64;
        let deleted = class == 1;
        let wrong = class == 2;

        // Initiator and visibility story first, creation time second.
        let initiator = if deleted {
            let roll: f64 = rng.random();
            if roll < 0.35 {
                Some(Initiator::Author)
            } else if roll < 0.95 {
                Some(Initiator::Moderator)
            } else {
                None
            }
        } else {
            None
        };
        let provenance = if deleted || wrong {
            // 30% vanish between snapshots 1 and 2, the rest between 2 and 3.
            if rng.random::<f64>() < 0.3 {
                Some(0)
            } else {
                Some(1)
            }
        } else {
            None
        };

        let (created, vanish_time) = match (provenance, initiator) {
            (Some(p), Some(Initiator::Author)) => {
                // Author deletions are quick: creation shortly before the
                // provenance snapshot, vanish shortly after it.
                let p_date = ts(snapshot_dates[p]);
                let created = p_date - Duration::minutes(rng.random_range(30..2880));
                let vanish = p_date + Duration::minutes(rng.random_range(5..1440));
                (created, Some(vanish))
            }
            (Some(p), _) => {
                // Moderator (or unannotated, or wrongly captured): creation
                // well before the provenance snapshot, vanish in the window
                // before the next snapshot.
                let start = creation_start;
                let p_date = snapshot_dates[p];
                let latest_creation = p_date.pred_opt().unwrap();
                let span = (latest_creation - start).num_days().max(1);
                let created = ts(start) + Duration::days(rng.random_range(0..span))
                    + Duration::minutes(rng.random_range(0..1440));
                let window_start = ts(p_date) + Duration::days(1);
                let window_len =
                    (ts(snapshot_dates[p + 1]) - window_start).num_days().max(2);
                let vanish = window_start + Duration::days(rng.random_range(0..window_len))
                    + Duration::minutes(rng.random_range(0..1440));
                (created, Some(vanish))
            }
            (None, _) => {
                let span = (creation_end - creation_start).num_days();
                let created = ts(creation_start) + Duration::days(rng.random_range(0..span))
                    + Duration::minutes(rng.random_range(0..1440));
                (created, None)
            }
        };

        // Planted profile signal: account age (days) by class, disjoint.
        // The kept-class cap keeps accounts created in 2011 on the right
        // side of the site-genesis floor.
        let age_days = if deleted {
            rng.random_range(1..=30)
        } else {
            rng.random_range(200..=800)
        };
        let account = created - Duration::days(age_days) - Duration::minutes(17);
        account_created.insert(owner, account);

        // Planted syntactic signal: body length (words) by class, disjoint.
        let body_words = if deleted {
            rng.random_range(4..=12)
        } else {
            rng.random_range(60..=100)
        };
        let body_text = nonsense_words(&mut rng, body_words);
        let body = format!(
            "<p>{}</p><pre><code>{}</code></pre>",
            body_text, CODE_SNIPPET
        );
        let title_words = rng.random_range(3..=6);
        let title = nonsense_words(&mut rng, title_words);

        // Class-specific community texture (not features; report material).
        let (score, views, favorites) = if deleted {
            let roll: f64 = rng.random();
            let score = if roll < 0.8 {
                0
            } else if roll < 0.95 {
                -(rng.random_range(1..=10) as i64)
            } else {
                rng.random_range(1..=3)
            };
            let views = if rng.random::<f64>() < 0.9 {
                0
            } else {
                rng.random_range(1..=20)
            };
            let favorites = if rng.random::<f64>() < 0.97 { 0 } else { 1 };
            (score, views, favorites)
        } else {
            let roll: f64 = rng.random();
            let score = if roll < 0.4 {
                0
            } else if roll < 0.5 {
                -(rng.random_range(1..=3) as i64)
            } else {
                rng.random_range(1..=50)
            };
            let views = rng.random_range(1..=500);
            let favorites = if rng.random::<f64>() < 0.7 { 0 } else { rng.random_range(1..=5) };
            (score, views, favorites)
        };

        let pool_tag = if deleted {
            format!("exile-{}", rng.random_range(1..=10))
        } else {
            format!("keep-{}", rng.random_range(1..=10))
        };
        let tags = vec![COMMON_TAG.to_string(), pool_tag];

        // Ids: two prior answers, main question, answers to it.
        let author_deleted = initiator == Some(Initiator::Author);
        let n_answers = if deleted {
            // Site rules: author-deleted questions have no answers.
            if !author_deleted && rng.random::<f64>() < 0.2 {
                1
            } else {
                0
            }
        } else if rng.random::<f64>() < 0.6 {
            rng.random_range(1..=3)
        } else {
            0
        };
        let base = alloc(3 + n_answers);
        let (prior_a1, prior_a2, qid) = (base, base + 1, base + 2);
        let answer_ids: Vec<u64> = (0..n_answers).map(|k| base + 3 + k).collect();

        // Priors: every author answers the hub question twice with constant
        // statistics, keeping community and content features class-free.
        let prior_base = account + Duration::hours(1);
        for (k, prior_id) in [prior_a1, prior_a2].into_iter().enumerate() {
            posts.push(PostRow {
                id: prior_id,
                type_id: 2,
                created: prior_base + Duration::hours(k as i64),
                score: 1,
                views: None,
                body: "<p>jorv trell</p>".into(),
                owner: Some(owner),
                title: None,
                tags: vec![],
                answer_count: None,
                comment_count: Some(1),
                favorite_count: None,
                accepted: None,
                parent: Some(hub_id),
                vanish: None,
            });
        }

        // Comments on the main question (visible before any vanish).
        let mut comment_scores = Vec::new();
        for _ in 0..rng.random_range(0..=3u32) {
            let at = created + Duration::minutes(rng.random_range(5..360));
            if vanish_time.is_some_and(|v| at >= v) {
                continue;
            }
            let score = if rng.random::<f64>() < 0.7 {
                0
            } else {
                rng.random_range(1..=5)
            };
            comments.row(&[
                ("Id", comment_id.to_string()),
                ("PostId", qid.to_string()),
                ("Score", score.to_string()),
                ("Text", "plonk crin".into()),
                ("CreationDate", fmt_ts(at)),
            ]);
            comment_id += 1;
            comment_scores.push(score);
        }

        // Answers.
        let mut accepted_answer = None;
        for (k, &aid) in answer_ids.iter().enumerate() {
            let at = created + Duration::minutes(30 + 60 * k as i64);
            posts.push(PostRow {
                id: aid,
                type_id: 2,
                created: at,
                score: rng.random_range(0..=5),
                views: None,
                body: "<p>glom prax nuzz</p>".into(),
                owner: Some(owner),
                title: None,
                tags: vec![],
                answer_count: None,
                comment_count: Some(0),
                favorite_count: None,
                accepted: None,
                parent: Some(qid),
                vanish: vanish_time,
            });
            if k == 0 && !deleted && rng.random::<f64>() < 0.5 {
                accepted_answer = Some(aid);
            }
        }

        // Deletion votes (deleted questions only, 80%).
        let mut delete_vote_dates = Vec::new();
        let mut negative_vote = false;
        if deleted {
            if negative_votes_planted < 2 && i % 97 == 5 {
                // A buggy vote predating the question.
                let at = (created - Duration::days(3)).date();
                votes.row(&[
                    ("Id", vote_id.to_string()),
                    ("PostId", qid.to_string()),
                    ("VoteTypeId", "10".into()),
                    ("CreationDate", at.format("%Y-%m-%d").to_string()),
                ]);
                vote_id += 1;
                delete_vote_dates.push(at);
                negative_vote = true;
                negative_votes_planted += 1;
            } else if rng.random::<f64>() < 0.8 {
                let vanish = vanish_time.expect("deleted questions vanish");
                let window = (vanish.date() - created.date()).num_days().max(0);
                let count = {
                    let roll: f64 = rng.random();
                    if roll < 0.65 {
                        1
                    } else if roll < 0.73 {
                        2
                    } else if roll < 0.93 {
                        3
                    } else if roll < 0.96 {
                        4
                    } else {
                        rng.random_range(5..=7)
                    }
                };
                let mut dates: Vec<NaiveDate> = (0..count)
                    .map(|_| created.date() + Duration::days(rng.random_range(0..=window)))
                    .collect();
                dates.sort();
                for at in &dates {
                    votes.row(&[
                        ("Id", vote_id.to_string()),
                        ("PostId", qid.to_string()),
                        ("VoteTypeId", "10".into()),
                        ("CreationDate", at.format("%Y-%m-%d").to_string()),
                    ]);
                    vote_id += 1;
                }
                delete_vote_dates = dates;
            }
        }

        // Edit history.
        let mut edit_types = Vec::new();
        let edit_chance = if deleted { 0.85 } else { 0.5 };
        if rng.random::<f64>() < edit_chance {
            let kinds = [
                HistoryType::EditTitle,
                HistoryType::EditBody,
                HistoryType::EditTags,
                HistoryType::SuggestedEditApplied,
            ];
            for _ in 0..rng.random_range(1..=3u32) {
                let kind = *kinds.choose(&mut rng).expect("non-empty");
                let at = created + Duration::minutes(rng.random_range(1..120));
                if vanish_time.is_some_and(|v| at >= v) {
                    continue;
                }
                history.row(&[
                    ("Id", history_id.to_string()),
                    ("PostId", qid.to_string()),
                    ("PostHistoryTypeId", kind.code().to_string()),
                    ("CreationDate", fmt_ts(at)),
                ]);
                history_id += 1;
                edit_types.push(kind);
            }
        }

        // Close events with era-mixed reason spellings.
        let close_chance = if deleted { 0.14 } else { 0.15 };
        let close = if rng.random::<f64>() < close_chance {
            let reasons = [
                "duplicate",
                "Exact Duplicate",
                "off topic",
                "Off-Topic",
                "subjective",
                "Subjective and Argumentative",
                "too localized",
                "Too Localized",
                "not a real question",
                "Not a Real Question",
                "community audit", // lands in the "other" bucket
            ];
            let reason = (*reasons.choose(&mut rng).expect("non-empty")).to_string();
            let at = created + Duration::minutes(rng.random_range(5..90));
            if vanish_time.is_none_or(|v| at < v) {
                history.row(&[
                    ("Id", history_id.to_string()),
                    ("PostId", qid.to_string()),
                    ("PostHistoryTypeId", HistoryType::PostClosed.code().to_string()),
                    ("CreationDate", fmt_ts(at)),
                    ("Comment", reason.clone()),
                ]);
                history_id += 1;
                Some((at, reason))
            } else {
                None
            }
        } else {
            None
        };

        // Deletion event at vanish time (90% of deleted; the rest exercise
        // the vote-date fallback). Wrongly captured rows never get one.
        let deletion_event = deleted && rng.random::<f64>() < 0.9;
        if deletion_event {
            history.row(&[
                ("Id", history_id.to_string()),
                ("PostId", qid.to_string()),
                ("PostHistoryTypeId", HistoryType::PostDeleted.code().to_string()),
                ("CreationDate", fmt_ts(vanish_time.expect("deleted"))),
            ]);
            history_id += 1;
        }

        // Delete/undelete pairs on 2% of kept questions, inside the final
        // inter-snapshot window so membership is unaffected.
        let undelete = if !deleted && !wrong && rng.random::<f64>() < 0.02 {
            let w_start = ts(snapshot_dates[1]) + Duration::days(2);
            let w_len = (ts(snapshot_dates[2]) - Duration::days(10) - w_start)
                .num_days()
                .max(2);
            let del_at = w_start + Duration::days(rng.random_range(0..w_len))
                + Duration::minutes(rng.random_range(0..600));
            let who = if rng.random::<f64>() < 0.5 {
                Initiator::Author
            } else {
                Initiator::Moderator
            };
            let gap = match who {
                Initiator::Author => Duration::seconds(rng.random_range(30..600)),
                _ => Duration::days(rng.random_range(1..3))
                    + Duration::minutes(rng.random_range(0..300)),
            };
            let undel_at = del_at + gap;
            for (kind, at) in [
                (HistoryType::PostDeleted, del_at),
                (HistoryType::PostUndeleted, undel_at),
            ] {
                history.row(&[
                    ("Id", history_id.to_string()),
                    ("PostId", qid.to_string()),
                    ("PostHistoryTypeId", kind.code().to_string()),
                    ("CreationDate", fmt_ts(at)),
                ]);
                history_id += 1;
            }
            Some((del_at, undel_at, who))
        } else {
            None
        };

        // User and badges. Half the authors earn a badge after the main
        // question: creation-time purity fodder.
        users.row(&[
            ("Id", owner.to_string()),
            ("Reputation", "25".into()),
            ("CreationDate", fmt_ts(account)),
            ("DisplayName", format!("user{owner}")),
        ]);
        badges.row(&[
            ("Id", badge_id.to_string()),
            ("UserId", owner.to_string()),
            ("Name", "Curious".into()),
            ("Date", fmt_ts(account + Duration::minutes(30))),
        ]);
        badge_id += 1;
        if rng.random::<f64>() < 0.5 {
            badges.row(&[
                ("Id", badge_id.to_string()),
                ("UserId", owner.to_string()),
                ("Name", "Notable".into()),
                ("Date", fmt_ts(created + Duration::days(10))),
            ]);
            badge_id += 1;
        }

        // One kept question is written without an owner to exercise the
        // missing-author exclusion path.
        let ownerless = !deleted && !wrong && !orphan_planted;
        if ownerless {
            orphan_planted = true;
        }
        posts.push(PostRow {
            id: qid,
            type_id: 1,
            created,
            score,
            views: Some(views),
            body,
            owner: (!ownerless).then_some(owner),
            title: Some(title),
            tags: tags.clone(),
            answer_count: Some(answer_ids.len() as u64),
            comment_count: Some(comment_scores.len() as u64),
            favorite_count: Some(favorites),
            accepted: accepted_answer,
            parent: None,
            vanish: vanish_time,
        });

        let initiator = match undelete {
            Some((_, _, who)) => Some(who),
            None => initiator,
        };
        questions.push(TruthQuestion {
            id: qid,
            owner,
            ownerless,
            created,
            deleted,
            wrongly_captured: wrong,
            initiator,
            provenance,
            score,
            views,
            favorites,
            answer_ids,
            accepted_answer,
            comment_scores,
            tags,
            body_words,
            body_prose: body_text,
            vanish_time,
            deletion_event,
            delete_vote_dates,
            negative_vote,
            edit_types,
            close,
            undelete: undelete.map(|(a, b, _)| (a, b)),
        });
    }

    // Write the three snapshots.
    let snapshots_dir = dir.join("snapshots");
    std::fs::create_dir_all(&snapshots_dir)?;
    let mut snapshots = Vec::new();
    for (s, date) in snapshot_dates.iter().enumerate() {
        let id = format!("s{}", s + 1);
        let snap_dir = snapshots_dir.join(format!("{date}_{id}"));
        std::fs::create_dir_all(&snap_dir)?;
        let snap_ts = ts(*date);

        let visible = |vanish: Option<Timestamp>, created: Timestamp| {
            created <= snap_ts && vanish.is_none_or(|v| v > snap_ts)
        };
        // Undeleted kept questions also disappear while their pair is open.
        let undelete_hidden = |q: &TruthQuestion| {
            q.undelete
                .is_some_and(|(del, undel)| del <= snap_ts && snap_ts < undel)
        };
        let hidden_qids: std::collections::BTreeSet<u64> = questions
            .iter()
            .filter(|q| undelete_hidden(q))
            .map(|q| q.id)
            .collect();

        let mut posts_writer = RowWriter::new("posts");
        for post in &posts {
            if !visible(post.vanish, post.created) || hidden_qids.contains(&post.id) {
                continue;
            }
            if let Some(parent) = post.parent {
                if hidden_qids.contains(&parent) {
                    continue;
                }
            }
            let mut attrs: Vec<(&str, String)> = vec![
                ("Id", post.id.to_string()),
                ("PostTypeId", post.type_id.to_string()),
                ("CreationDate", fmt_ts(post.created)),
                ("Score", post.score.to_string()),
                ("Body", post.body.clone()),
            ];
            if let Some(owner) = post.owner {
                attrs.push(("OwnerUserId", owner.to_string()));
            }
            if let Some(v) = post.views {
                attrs.push(("ViewCount", v.to_string()));
            }
            if let Some(t) = &post.title {
                attrs.push(("Title", t.clone()));
            }
            if !post.tags.is_empty() {
                let tag_str: String = post.tags.iter().map(|t| format!("<{t}>")).collect();
                attrs.push(("Tags", tag_str));
            }
            if let Some(c) = post.answer_count {
                attrs.push(("AnswerCount", c.to_string()));
            }
            if let Some(c) = post.comment_count {
                attrs.push(("CommentCount", c.to_string()));
            }
            if let Some(c) = post.favorite_count {
                attrs.push(("FavoriteCount", c.to_string()));
            }
            if let Some(a) = post.accepted {
                attrs.push(("AcceptedAnswerId", a.to_string()));
            }
            if let Some(p) = post.parent {
                attrs.push(("ParentId", p.to_string()));
            }
            posts_writer.row(&attrs);
        }
        std::fs::write(snap_dir.join("Posts.xml"), posts_writer.finish())?;

        // Auxiliary tables carry every row dated at or before the snapshot.
        // Rows belonging to posts that vanish later stay in place: the
        // pipeline unions these tables across snapshots, so the union is
        // the same either way.
        std::fs::write(snap_dir.join("Users.xml"), users.snapshot("users", snap_ts))?;
        std::fs::write(snap_dir.join("Votes.xml"), votes.snapshot("votes", snap_ts))?;
        std::fs::write(
            snap_dir.join("Comments.xml"),
            comments.snapshot("comments", snap_ts),
        )?;
        std::fs::write(snap_dir.join("Badges.xml"), badges.snapshot("badges", snap_ts))?;
        std::fs::write(
            snap_dir.join("PostHistory.xml"),
            history.snapshot("posthistory", snap_ts),
        )?;
        snapshots.push((id, *date, snap_dir));
    }

    // Sidecars.
    let exclusions_file = dir.join("exclusions.csv");
    let mut exclusions = String::from("question_id\n");
    for q in questions.iter().filter(|q| q.wrongly_captured) {
        let _ = writeln!(exclusions, "{}", q.id);
    }
    std::fs::write(&exclusions_file, exclusions)?;

    let initiators_file = dir.join("initiators.csv");
    let mut initiators = String::from("question_id,initiator\n");
    for q in &questions {
        if let Some(who) = q.initiator {
            let _ = writeln!(initiators, "{},{}", q.id, who.as_str());
        }
    }
    std::fs::write(&initiators_file, initiators)?;

    let lexicon_file = dir.join("lexicon.dic");
    std::fs::write(&lexicon_file, Lexicon::starter_source())?;

    Ok(SynthCorpus {
        dir: dir.to_path_buf(),
        snapshots,
        questions,
        account_created,
        prior_answers_per_author: 2,
        hub_question_id: hub_id,
        hub_created,
        exclusions_file,
        initiators_file,
        lexicon_file,
    })
}

/// Accumulates dump rows as (timestamp, row text) so snapshots can filter
/// by date without regenerating.
#[derive(Default, Clone)]
struct RowsBuf {
    rows: Vec<(Timestamp, String)>,
}

impl RowsBuf {
    fn row(&mut self, attrs: &[(&str, String)]) {
        let mut line = String::from("  <row");
        let mut date = None;
        for (key, value) in attrs {
            if *key == "CreationDate" || *key == "Date" {
                date = Some(
                    crate::dump::parse_timestamp(value).expect("generator writes valid dates"),
                );
            }
            let _ = write!(line, " {key}=\"{}\"", xml_escape(value));
        }
        line.push_str(" />\n");
        self.rows.push((date.expect("row carries a date"), line));
    }

    /// Renders the rows dated at or before the snapshot time.
    fn snapshot(&self, root: &str, snap_ts: Timestamp) -> String {
        let mut out = String::from("<?xml version=\"1.0\" encoding=\"utf-8\"?>\n");
        let _ = writeln!(out, "<{root}>");
        for (date, line) in &self.rows {
            if *date <= snap_ts {
                out.push_str(line);
            }
        }
        let _ = writeln!(out, "</{root}>");
        out
    }
}
