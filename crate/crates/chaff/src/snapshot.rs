//! Per-snapshot question catalogs and the deleted-question set difference.
//!
//! A catalog is a snapshot's question-id inventory plus a compact summary
//! per question. Questions present in at least one earlier snapshot but
//! absent from the most recent one are the deleted-question corpus. Catalogs
//! persist to a small binary file (sorted ids) with a CSV summary sidecar so
//! large snapshots need only be parsed once.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use chrono::NaiveDate;
use thiserror::Error;

use crate::dump::{parse_tags, parse_timestamp, PostRecord, Timestamp};

#[derive(Debug, Error)]
pub enum SnapshotError {
    #[error("duplicate question id {id} in snapshot {snapshot_id}")]
    DuplicateQuestionId { snapshot_id: String, id: u64 },
    #[error("snapshot {snapshot_id} ({snapshot_date}) is not earlier than the latest snapshot ({latest_date})")]
    SnapshotOrder {
        snapshot_id: String,
        snapshot_date: NaiveDate,
        latest_date: NaiveDate,
    },
    #[error("no earlier snapshots to diff against")]
    NoEarlierSnapshots,
    #[error("{path}: not a catalog file")]
    BadCatalogFile { path: String },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    BadSidecar(String),
}

/// Compact per-question summary kept alongside the id inventory.
#[derive(Debug, Clone, PartialEq)]
pub struct QuestionSummary {
    pub creation_date: Timestamp,
    pub score: i64,
    pub owner_user_id: Option<i64>,
    pub tags: Vec<String>,
}

/// One snapshot's question inventory.
#[derive(Debug, Clone)]
pub struct SnapshotCatalog {
    pub snapshot_id: String,
    pub snapshot_date: NaiveDate,
    ids: BTreeSet<u64>,
    summaries: BTreeMap<u64, QuestionSummary>,
}

impl SnapshotCatalog {
    /// Builds a catalog from one snapshot's post records, keeping exactly the
    /// question-type posts. Deterministic for identical input.
    pub fn build(
        posts: impl IntoIterator<Item = PostRecord>,
        snapshot_id: impl Into<String>,
        snapshot_date: NaiveDate,
    ) -> Result<Self, SnapshotError> {
        let snapshot_id = snapshot_id.into();
        let mut ids = BTreeSet::new();
        let mut summaries = BTreeMap::new();
        for post in posts {
            if !post.is_question() {
                continue;
            }
            if !ids.insert(post.id) {
                return Err(SnapshotError::DuplicateQuestionId {
                    snapshot_id,
                    id: post.id,
                });
            }
            summaries.insert(
                post.id,
                QuestionSummary {
                    creation_date: post.creation_date,
                    score: post.score,
                    owner_user_id: post.owner_user_id,
                    tags: post.tags,
                },
            );
        }
        Ok(SnapshotCatalog {
            snapshot_id,
            snapshot_date,
            ids,
            summaries,
        })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn contains(&self, id: u64) -> bool {
        self.ids.contains(&id)
    }

    pub fn ids(&self) -> impl Iterator<Item = u64> + '_ {
        self.ids.iter().copied()
    }

    pub fn summary(&self, id: u64) -> Option<&QuestionSummary> {
        self.summaries.get(&id)
    }

    pub fn summaries(&self) -> impl Iterator<Item = (u64, &QuestionSummary)> {
        self.summaries.iter().map(|(id, s)| (*id, s))
    }

    /// Writes the binary catalog and its `<path>.summary.csv` sidecar.
    /// Both files land atomically (temp sibling + rename).
    pub fn write_to(&self, path: &Path) -> Result<(), SnapshotError> {
        let tmp = tmp_sibling(path);
        {
            let mut w = BufWriter::new(File::create(&tmp)?);
            w.write_all(MAGIC)?;
            let id_bytes = self.snapshot_id.as_bytes();
            w.write_all(&(id_bytes.len() as u16).to_le_bytes())?;
            w.write_all(id_bytes)?;
            let date = self.snapshot_date.format("%Y-%m-%d").to_string();
            w.write_all(date.as_bytes())?;
            w.write_all(&(self.ids.len() as u64).to_le_bytes())?;
            for id in &self.ids {
                w.write_all(&id.to_le_bytes())?;
            }
            w.flush()?;
        }
        std::fs::rename(&tmp, path)?;

        let sidecar = sidecar_path(path);
        let sidecar_tmp = tmp_sibling(&sidecar);
        {
            let mut csv = csv::Writer::from_path(&sidecar_tmp)?;
            csv.write_record(["question_id", "creation_date", "score", "owner_user_id", "tags"])?;
            for (id, s) in &self.summaries {
                csv.write_record([
                    id.to_string(),
                    s.creation_date.format("%Y-%m-%dT%H:%M:%S").to_string(),
                    s.score.to_string(),
                    s.owner_user_id.map(|o| o.to_string()).unwrap_or_default(),
                    s.tags.iter().map(|t| format!("<{t}>")).collect(),
                ])?;
            }
            csv.flush()?;
        }
        std::fs::rename(&sidecar_tmp, &sidecar)?;
        Ok(())
    }

    /// Reads a catalog written by [`SnapshotCatalog::write_to`]. The summary
    /// sidecar is required.
    pub fn read_from(path: &Path) -> Result<Self, SnapshotError> {
        let bad = || SnapshotError::BadCatalogFile {
            path: path.display().to_string(),
        };
        let mut r = BufReader::new(File::open(path)?);
        let mut magic = [0u8; 8];
        r.read_exact(&mut magic).map_err(|_| bad())?;
        if &magic != MAGIC {
            return Err(bad());
        }
        let mut len2 = [0u8; 2];
        r.read_exact(&mut len2).map_err(|_| bad())?;
        let mut id_bytes = vec![0u8; u16::from_le_bytes(len2) as usize];
        r.read_exact(&mut id_bytes).map_err(|_| bad())?;
        let snapshot_id = String::from_utf8(id_bytes).map_err(|_| bad())?;
        let mut date_bytes = [0u8; 10];
        r.read_exact(&mut date_bytes).map_err(|_| bad())?;
        let date_str = std::str::from_utf8(&date_bytes).map_err(|_| bad())?;
        let snapshot_date =
            NaiveDate::parse_from_str(date_str, "%Y-%m-%d").map_err(|_| bad())?;
        let mut len8 = [0u8; 8];
        r.read_exact(&mut len8).map_err(|_| bad())?;
        let count = u64::from_le_bytes(len8);
        let mut ids = BTreeSet::new();
        for _ in 0..count {
            let mut id8 = [0u8; 8];
            r.read_exact(&mut id8).map_err(|_| bad())?;
            ids.insert(u64::from_le_bytes(id8));
        }

        let mut summaries = BTreeMap::new();
        let mut csv = csv::Reader::from_path(sidecar_path(path))?;
        for row in csv.records() {
            let row = row?;
            let field = |i: usize| row.get(i).unwrap_or_default();
            let id: u64 = field(0)
                .parse()
                .map_err(|_| SnapshotError::BadSidecar(format!("bad question_id `{}`", field(0))))?;
            let creation_date = parse_timestamp(field(1)).map_err(SnapshotError::BadSidecar)?;
            let score: i64 = field(2)
                .parse()
                .map_err(|_| SnapshotError::BadSidecar(format!("bad score `{}`", field(2))))?;
            let owner_user_id = if field(3).is_empty() {
                None
            } else {
                Some(field(3).parse().map_err(|_| {
                    SnapshotError::BadSidecar(format!("bad owner `{}`", field(3)))
                })?)
            };
            let tags = parse_tags(field(4)).map_err(|e| SnapshotError::BadSidecar(e.to_string()))?;
            summaries.insert(
                id,
                QuestionSummary {
                    creation_date,
                    score,
                    owner_user_id,
                    tags,
                },
            );
        }
        Ok(SnapshotCatalog {
            snapshot_id,
            snapshot_date,
            ids,
            summaries,
        })
    }
}

const MAGIC: &[u8; 8] = b"CHFCAT01";

fn sidecar_path(path: &Path) -> std::path::PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".summary.csv");
    std::path::PathBuf::from(name)
}

fn tmp_sibling(path: &Path) -> std::path::PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".tmp");
    std::path::PathBuf::from(name)
}

/// The deleted-question corpus: ids present in earlier snapshots but absent
/// from the latest, with provenance (the most recent earlier snapshot that
/// contained each id).
#[derive(Debug, Clone, Default)]
pub struct DeletedQuestionSet {
    ids: BTreeSet<u64>,
    provenance: BTreeMap<u64, String>,
    pub exclusions_applied: u64,
}

impl DeletedQuestionSet {
    /// Reassembles a set from stored `(id, provenance)` pairs, e.g. when
    /// loading a corpus file written by an earlier run.
    pub fn from_parts(
        entries: impl IntoIterator<Item = (u64, String)>,
        exclusions_applied: u64,
    ) -> Self {
        let mut set = DeletedQuestionSet {
            exclusions_applied,
            ..Default::default()
        };
        for (id, provenance) in entries {
            set.ids.insert(id);
            set.provenance.insert(id, provenance);
        }
        set
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn contains(&self, id: u64) -> bool {
        self.ids.contains(&id)
    }

    pub fn ids(&self) -> impl Iterator<Item = u64> + '_ {
        self.ids.iter().copied()
    }

    pub fn id_set(&self) -> &BTreeSet<u64> {
        &self.ids
    }

    pub fn provenance(&self, id: u64) -> Option<&str> {
        self.provenance.get(&id).map(String::as_str)
    }
}

/// Computes `(⋃ earlier ids) \ latest ids`.
///
/// Every earlier snapshot must predate the latest one. Provenance records
/// the most recent earlier snapshot containing each deleted id.
pub fn find_deleted(
    earlier: &[SnapshotCatalog],
    latest: &SnapshotCatalog,
) -> Result<DeletedQuestionSet, SnapshotError> {
    if earlier.is_empty() {
        return Err(SnapshotError::NoEarlierSnapshots);
    }
    for snap in earlier {
        if snap.snapshot_date >= latest.snapshot_date {
            return Err(SnapshotError::SnapshotOrder {
                snapshot_id: snap.snapshot_id.clone(),
                snapshot_date: snap.snapshot_date,
                latest_date: latest.snapshot_date,
            });
        }
    }
    let mut by_date: Vec<&SnapshotCatalog> = earlier.iter().collect();
    by_date.sort_by(|a, b| {
        a.snapshot_date
            .cmp(&b.snapshot_date)
            .then_with(|| a.snapshot_id.cmp(&b.snapshot_id))
    });

    let mut result = DeletedQuestionSet::default();
    for snap in by_date {
        for id in snap.ids() {
            if !latest.contains(id) {
                result.ids.insert(id);
                // Later iterations overwrite: provenance ends at the most
                // recent earlier snapshot containing the id.
                result.provenance.insert(id, snap.snapshot_id.clone());
            }
        }
    }
    Ok(result)
}

/// Removes known false captures from the corpus, counting how many of the
/// exclusion ids were actually present.
pub fn apply_exclusions(
    set: &DeletedQuestionSet,
    exclusion_ids: &BTreeSet<u64>,
) -> DeletedQuestionSet {
    let mut out = set.clone();
    let mut removed = 0;
    for id in exclusion_ids {
        if out.ids.remove(id) {
            out.provenance.remove(id);
            removed += 1;
        }
    }
    out.exclusions_applied += removed;
    out
}

/// Who initiated a question's deletion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Initiator {
    Author,
    Moderator,
    Unknown,
}

impl Initiator {
    pub fn as_str(self) -> &'static str {
        match self {
            Initiator::Author => "author",
            Initiator::Moderator => "moderator",
            Initiator::Unknown => "unknown",
        }
    }
}

impl std::str::FromStr for Initiator {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "author" => Ok(Initiator::Author),
            "moderator" => Ok(Initiator::Moderator),
            "unknown" | "" => Ok(Initiator::Unknown),
            other => Err(format!("unknown initiator `{other}`")),
        }
    }
}

/// Sidecar annotation mapping a deleted question to its deletion initiator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InitiatorAnnotation {
    pub question_id: u64,
    pub initiator: Initiator,
}

/// Exhaustive, disjoint partition of a deleted-question set by initiator.
#[derive(Debug, Clone, Default)]
pub struct InitiatorPartition {
    pub author: BTreeSet<u64>,
    pub moderator: BTreeSet<u64>,
    pub unknown: BTreeSet<u64>,
    /// Annotations that referenced ids outside the corpus (warned, skipped).
    pub skipped_annotations: u64,
}

impl InitiatorPartition {
    pub fn total(&self) -> usize {
        self.author.len() + self.moderator.len() + self.unknown.len()
    }

    pub fn set_for(&self, initiator: Initiator) -> &BTreeSet<u64> {
        match initiator {
            Initiator::Author => &self.author,
            Initiator::Moderator => &self.moderator,
            Initiator::Unknown => &self.unknown,
        }
    }

    pub fn initiator_of(&self, id: u64) -> Initiator {
        if self.author.contains(&id) {
            Initiator::Author
        } else if self.moderator.contains(&id) {
            Initiator::Moderator
        } else {
            Initiator::Unknown
        }
    }
}

/// Joins initiator annotations onto the corpus. Ids without an annotation
/// land in the `unknown` cell; annotations for ids outside the corpus are
/// skipped and counted. A later annotation for the same id wins.
pub fn join_initiators(
    set: &DeletedQuestionSet,
    annotations: impl IntoIterator<Item = InitiatorAnnotation>,
) -> InitiatorPartition {
    let mut assigned: BTreeMap<u64, Initiator> = BTreeMap::new();
    let mut skipped = 0;
    for ann in annotations {
        if set.contains(ann.question_id) {
            assigned.insert(ann.question_id, ann.initiator);
        } else {
            skipped += 1;
        }
    }
    let mut partition = InitiatorPartition {
        skipped_annotations: skipped,
        ..Default::default()
    };
    for id in set.ids() {
        match assigned.get(&id).copied().unwrap_or(Initiator::Unknown) {
            Initiator::Author => partition.author.insert(id),
            Initiator::Moderator => partition.moderator.insert(id),
            Initiator::Unknown => partition.unknown.insert(id),
        };
    }
    partition
}

/// Reads an exclusion list: CSV with header `question_id`.
pub fn read_exclusions(path: &Path) -> Result<BTreeSet<u64>, SnapshotError> {
    let mut reader = csv::Reader::from_path(path)?;
    check_header(&reader.headers()?.clone(), &["question_id"], path)?;
    let mut ids = BTreeSet::new();
    for row in reader.records() {
        let row = row?;
        let raw = row.get(0).unwrap_or_default();
        let id = raw
            .parse()
            .map_err(|_| SnapshotError::BadSidecar(format!("bad question_id `{raw}`")))?;
        ids.insert(id);
    }
    Ok(ids)
}

/// Reads initiator annotations: CSV with header `question_id,initiator`.
pub fn read_initiators(path: &Path) -> Result<Vec<InitiatorAnnotation>, SnapshotError> {
    let mut reader = csv::Reader::from_path(path)?;
    check_header(&reader.headers()?.clone(), &["question_id", "initiator"], path)?;
    let mut out = Vec::new();
    for row in reader.records() {
        let row = row?;
        let raw_id = row.get(0).unwrap_or_default();
        let question_id = raw_id
            .parse()
            .map_err(|_| SnapshotError::BadSidecar(format!("bad question_id `{raw_id}`")))?;
        let initiator = row
            .get(1)
            .unwrap_or_default()
            .parse()
            .map_err(SnapshotError::BadSidecar)?;
        out.push(InitiatorAnnotation {
            question_id,
            initiator,
        });
    }
    Ok(out)
}

fn check_header(
    headers: &csv::StringRecord,
    expected: &[&str],
    path: &Path,
) -> Result<(), SnapshotError> {
    let got: Vec<&str> = headers.iter().collect();
    if got != expected {
        return Err(SnapshotError::BadSidecar(format!(
            "{}: expected header {expected:?}, found {got:?}",
            path.display()
        )));
    }
    Ok(())
}
