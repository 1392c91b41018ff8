//! Streaming ingestion of Stack Exchange style data-dump files.
//!
//! Dump files are XML documents whose payload is a flat sequence of `<row>`
//! elements with attributes (`Id`, `PostTypeId`, `CreationDate`, ...). The
//! parser in this module walks a file in a single pass with a reused buffer,
//! so memory usage is independent of file size. Rows that fail to parse are
//! reported on a per-row error channel and counted rather than silently
//! dropped; only structural XML damage aborts a parse.

mod html;
mod parse;
mod record;

pub use html::{count_bare_urls, strip_html, StrippedBody};
pub use parse::{open_dump, parse_stream, read_all, MalformedRow, RecordStream, RowItem};
pub use record::{
    parse_tags, parse_timestamp, BadgeRecord, CommentRecord, DumpRecord, FileKind, HistoryType,
    PostHistoryRecord, PostRecord, PostType, Row, TagParseError, Timestamp, UserRecord, VoteType,
    VoteRecord, SITE_GENESIS,
};

use thiserror::Error;

/// Structural failures that abort a stream parse.
#[derive(Debug, Error)]
pub enum DumpError {
    #[error("malformed document at byte {position}: {reason}")]
    MalformedDocument { position: u64, reason: String },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
