//! Shared data assembly for the pipeline commands: streaming table reads
//! with malformed-row accounting, cross-snapshot unions, and corpus-file
//! round-tripping.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use crate::dump::{
    open_dump, DumpRecord, FileKind, MalformedRow, RowItem, Timestamp,
};
use crate::snapshot::{DeletedQuestionSet, Initiator, InitiatorPartition, SnapshotCatalog};
use crate::util::write_atomic;

use super::{CliError, RunConfig, SnapshotSource};

/// One malformed row, with file context for the error summary.
#[derive(Debug, Clone)]
pub struct LoggedMalformedRow {
    pub snapshot_id: String,
    pub file: String,
    pub row: MalformedRow,
}

/// Accumulates malformed rows across files.
#[derive(Debug, Default)]
pub struct ParseLog {
    pub rows: Vec<LoggedMalformedRow>,
}

impl ParseLog {
    pub fn count(&self) -> u64 {
        self.rows.len() as u64
    }

    /// Writes the per-row error summary CSV.
    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let mut out = String::from("snapshot_id,file,row_number,position,reason\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                row.snapshot_id,
                row.file,
                row.row.row_number,
                row.row.position,
                row.row.reason.replace(',', ";"),
            ));
        }
        write_atomic(path, out.as_bytes())
            .map_err(|e| CliError::Internal(format!("parse log write: {e}")))
    }
}

/// Streams one dump table, handing records to `consume` and collecting
/// malformed rows. A missing file yields `Ok(false)` so callers can degrade
/// gracefully (per-table reports are simply absent).
pub fn stream_table<T: DumpRecord>(
    snapshot: &SnapshotSource,
    log: &mut ParseLog,
    mut consume: impl FnMut(T),
) -> Result<bool, CliError> {
    let path = snapshot.dir.join(T::KIND.file_name());
    if !path.is_file() {
        return Ok(false);
    }
    let stream = open_dump::<T>(&path)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    for item in stream {
        match item.map_err(|e| CliError::Data(format!("{}: {e}", path.display())))? {
            RowItem::Record(record) => consume(record),
            RowItem::Malformed(row) => log.rows.push(LoggedMalformedRow {
                snapshot_id: snapshot.id.clone(),
                file: T::KIND.file_name().to_string(),
                row,
            }),
        }
    }
    Ok(true)
}

/// Loads the catalogs written by the ingest command, ordered by date.
pub fn load_catalogs(config: &RunConfig) -> Result<Vec<SnapshotCatalog>, CliError> {
    let dir = config.catalogs_dir();
    let mut catalogs = Vec::new();
    for snap in config.ordered_snapshots() {
        let path = catalog_path(&dir, &snap.id);
        if !path.is_file() {
            return Err(CliError::Usage(format!(
                "catalog {} not found; run `chaff ingest` first",
                path.display()
            )));
        }
        catalogs.push(
            SnapshotCatalog::read_from(&path)
                .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?,
        );
    }
    Ok(catalogs)
}

pub fn catalog_path(dir: &Path, snapshot_id: &str) -> PathBuf {
    dir.join(format!("{snapshot_id}.catalog"))
}

/// Writes the corpus CSV: `question_id,provenance,initiator`.
pub fn write_corpus(
    path: &Path,
    set: &DeletedQuestionSet,
    partition: &InitiatorPartition,
) -> Result<(), CliError> {
    let mut out = String::from("question_id,provenance,initiator\n");
    for id in set.ids() {
        out.push_str(&format!(
            "{},{},{}\n",
            id,
            set.provenance(id).unwrap_or(""),
            partition.initiator_of(id).as_str(),
        ));
    }
    write_atomic(path, out.as_bytes())
        .map_err(|e| CliError::Internal(format!("corpus write: {e}")))
}

/// Reads a corpus CSV back into the set plus its initiator partition.
pub fn read_corpus(
    path: &Path,
) -> Result<(DeletedQuestionSet, InitiatorPartition), CliError> {
    let content = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read corpus {}: {e}", path.display())))?;
    let mut lines = content.lines();
    let header = lines.next().unwrap_or_default();
    if header != "question_id,provenance,initiator" {
        return Err(CliError::Data(format!(
            "{}: unexpected corpus header `{header}`",
            path.display()
        )));
    }
    let mut entries = Vec::new();
    let mut partition = InitiatorPartition::default();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(CliError::Data(format!(
                "{}: row {} malformed",
                path.display(),
                i + 2
            )));
        }
        let id: u64 = fields[0].parse().map_err(|_| {
            CliError::Data(format!("{}: row {} bad question_id", path.display(), i + 2))
        })?;
        entries.push((id, fields[1].to_string()));
        let initiator: Initiator = fields[2]
            .parse()
            .map_err(|e: String| CliError::Data(format!("{}: {e}", path.display())))?;
        match initiator {
            Initiator::Author => partition.author.insert(id),
            Initiator::Moderator => partition.moderator.insert(id),
            Initiator::Unknown => partition.unknown.insert(id),
        };
    }
    Ok((DeletedQuestionSet::from_parts(entries, 0), partition))
}

/// Cross-snapshot unions of the auxiliary tables, de-duplicated by row id.
#[derive(Debug, Default)]
pub struct AuxTables {
    pub votes: Vec<crate::dump::VoteRecord>,
    pub comments: Vec<crate::dump::CommentRecord>,
    pub history: Vec<crate::dump::PostHistoryRecord>,
    pub users: BTreeMap<i64, crate::dump::UserRecord>,
    /// Tables that were missing everywhere (reports depending on them are
    /// flagged absent rather than failing the run).
    pub missing_tables: Vec<&'static str>,
}

/// Reads votes, comments, post history, and users across every snapshot.
pub fn union_aux_tables(config: &RunConfig, log: &mut ParseLog) -> Result<AuxTables, CliError> {
    let mut votes: BTreeMap<u64, crate::dump::VoteRecord> = BTreeMap::new();
    let mut comments: BTreeMap<u64, crate::dump::CommentRecord> = BTreeMap::new();
    let mut history: BTreeMap<u64, crate::dump::PostHistoryRecord> = BTreeMap::new();
    let mut users: BTreeMap<i64, crate::dump::UserRecord> = BTreeMap::new();
    let mut seen = [false; 4];
    for snap in config.ordered_snapshots() {
        seen[0] |= stream_table::<crate::dump::VoteRecord>(snap, log, |v| {
            votes.insert(v.id, v);
        })?;
        seen[1] |= stream_table::<crate::dump::CommentRecord>(snap, log, |c| {
            comments.insert(c.id, c);
        })?;
        seen[2] |= stream_table::<crate::dump::PostHistoryRecord>(snap, log, |h| {
            history.insert(h.id, h);
        })?;
        seen[3] |= stream_table::<crate::dump::UserRecord>(snap, log, |u| {
            users.insert(u.id, u);
        })?;
    }
    let mut missing = Vec::new();
    for (i, kind) in [
        FileKind::Votes,
        FileKind::Comments,
        FileKind::PostHistory,
        FileKind::Users,
    ]
    .iter()
    .enumerate()
    {
        if !seen[i] {
            missing.push(kind.file_name());
        }
    }
    Ok(AuxTables {
        votes: votes.into_values().collect(),
        comments: comments.into_values().collect(),
        history: history.into_values().collect(),
        users,
        missing_tables: missing,
    })
}

/// Question records needed by characterization: full records for the
/// deleted corpus (from provenance snapshots) and for the closed class
/// (from the latest snapshot); per-post owner/creation pairs for prior-post
/// counting; answer parent links for the classes of interest.
#[derive(Debug, Default)]
pub struct QuestionStore {
    pub deleted_records: Vec<crate::dump::PostRecord>,
    pub closed_records: Vec<crate::dump::PostRecord>,
    /// Answer id -> parent question id, for parents in scope.
    pub answer_parents: BTreeMap<u64, u64>,
    /// Post creation times per owner (all posts, all snapshots), sorted.
    pub posts_by_owner: BTreeMap<i64, Vec<Timestamp>>,
}

pub fn collect_question_store(
    config: &RunConfig,
    deleted: &DeletedQuestionSet,
    closed_ids: &BTreeSet<u64>,
    log: &mut ParseLog,
) -> Result<QuestionStore, CliError> {
    let mut store = QuestionStore::default();
    let mut seen_posts: BTreeSet<u64> = BTreeSet::new();
    let mut seen_deleted: BTreeSet<u64> = BTreeSet::new();
    let latest_id = config.latest_snapshot().id.clone();
    for snap in config.ordered_snapshots() {
        let is_latest = snap.id == latest_id;
        let snap_id = snap.id.clone();
        stream_table::<crate::dump::PostRecord>(snap, log, |post| {
            if seen_posts.insert(post.id) {
                store
                    .posts_by_owner
                    .entry(post.owner_user_id.unwrap_or(i64::MIN))
                    .or_default()
                    .push(post.creation_date);
            }
            if let Some(parent) = post.parent_id {
                if deleted.contains(parent) || closed_ids.contains(&parent) {
                    store.answer_parents.insert(post.id, parent);
                }
            }
            if post.is_question() {
                if deleted.contains(post.id)
                    && deleted.provenance(post.id) == Some(snap_id.as_str())
                    && seen_deleted.insert(post.id)
                {
                    store.deleted_records.push(post.clone());
                }
                if is_latest && closed_ids.contains(&post.id) {
                    store.closed_records.push(post);
                }
            }
        })?;
    }
    for posts in store.posts_by_owner.values_mut() {
        posts.sort_unstable();
    }
    store.deleted_records.sort_by_key(|p| p.id);
    store.closed_records.sort_by_key(|p| p.id);
    Ok(store)
}

/// Reads raw initiator annotations as a map (used for undeletion latency,
/// which also covers questions outside the deleted corpus).
pub fn annotation_map(config: &RunConfig) -> Result<BTreeMap<u64, Initiator>, CliError> {
    let Some(path) = &config.initiators else {
        return Ok(BTreeMap::new());
    };
    let annotations = crate::snapshot::read_initiators(path)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    Ok(annotations
        .into_iter()
        .map(|a| (a.question_id, a.initiator))
        .collect())
}
