//! Typed records for the six dump tables and their row-level parsing.

use chrono::{NaiveDate, NaiveDateTime};
use thiserror::Error;

/// All dump timestamps are naive; the dump carries no zone and every analysis
/// downstream works on differences, so a consistent UTC reading suffices.
pub type Timestamp = NaiveDateTime;

/// Earliest valid creation date: the site's public genesis.
pub const SITE_GENESIS: NaiveDate = match NaiveDate::from_ymd_opt(2008, 7, 31) {
    Some(d) => d,
    None => unreachable!(),
};

/// Parses a dump timestamp (`YYYY-MM-DDThh:mm:ss[.fff]`, or a bare date for
/// date-granular tables such as votes).
pub fn parse_timestamp(s: &str) -> Result<Timestamp, String> {
    if let Ok(dt) = NaiveDateTime::parse_from_str(s, "%Y-%m-%dT%H:%M:%S%.f") {
        return Ok(dt);
    }
    if let Ok(d) = NaiveDate::parse_from_str(s, "%Y-%m-%d") {
        return Ok(d.and_hms_opt(0, 0, 0).expect("midnight is always valid"));
    }
    Err(format!("invalid timestamp `{s}`"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PostType {
    Question,
    Answer,
    /// Any other documented or future type id, preserved as-is.
    Other(u8),
}

impl PostType {
    pub fn from_code(code: u8) -> Self {
        match code {
            1 => PostType::Question,
            2 => PostType::Answer,
            c => PostType::Other(c),
        }
    }

    pub fn code(self) -> u8 {
        match self {
            PostType::Question => 1,
            PostType::Answer => 2,
            PostType::Other(c) => c,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VoteType {
    Up,
    Down,
    Favorite,
    Close,
    Deletion,
    Undeletion,
    Other(u8),
}

impl VoteType {
    pub fn from_code(code: u8) -> Self {
        match code {
            2 => VoteType::Up,
            3 => VoteType::Down,
            5 => VoteType::Favorite,
            6 => VoteType::Close,
            10 => VoteType::Deletion,
            11 => VoteType::Undeletion,
            c => VoteType::Other(c),
        }
    }

    pub fn code(self) -> u8 {
        match self {
            VoteType::Up => 2,
            VoteType::Down => 3,
            VoteType::Favorite => 5,
            VoteType::Close => 6,
            VoteType::Deletion => 10,
            VoteType::Undeletion => 11,
            VoteType::Other(c) => c,
        }
    }
}

/// Post-history event kinds, mapped from the documented dump type-id table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HistoryType {
    EditTitle,
    EditBody,
    EditTags,
    PostClosed,
    PostReopened,
    PostDeleted,
    PostUndeleted,
    SuggestedEditApplied,
    Other(u8),
}

impl HistoryType {
    pub fn from_code(code: u8) -> Self {
        match code {
            4 => HistoryType::EditTitle,
            5 => HistoryType::EditBody,
            6 => HistoryType::EditTags,
            10 => HistoryType::PostClosed,
            11 => HistoryType::PostReopened,
            12 => HistoryType::PostDeleted,
            13 => HistoryType::PostUndeleted,
            24 => HistoryType::SuggestedEditApplied,
            c => HistoryType::Other(c),
        }
    }

    pub fn code(self) -> u8 {
        match self {
            HistoryType::EditTitle => 4,
            HistoryType::EditBody => 5,
            HistoryType::EditTags => 6,
            HistoryType::PostClosed => 10,
            HistoryType::PostReopened => 11,
            HistoryType::PostDeleted => 12,
            HistoryType::PostUndeleted => 13,
            HistoryType::SuggestedEditApplied => 24,
            HistoryType::Other(c) => c,
        }
    }

    /// True for the three direct edit kinds plus applied suggested edits.
    pub fn is_content_edit(self) -> bool {
        matches!(
            self,
            HistoryType::EditTitle
                | HistoryType::EditBody
                | HistoryType::EditTags
                | HistoryType::SuggestedEditApplied
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PostRecord {
    pub id: u64,
    pub post_type: PostType,
    pub creation_date: Timestamp,
    pub score: i64,
    pub view_count: Option<u64>,
    pub body: String,
    pub owner_user_id: Option<i64>,
    pub title: Option<String>,
    pub tags: Vec<String>,
    pub answer_count: Option<u64>,
    pub comment_count: Option<u64>,
    pub favorite_count: Option<u64>,
    pub accepted_answer_id: Option<u64>,
    pub parent_id: Option<u64>,
}

impl PostRecord {
    pub fn is_question(&self) -> bool {
        self.post_type == PostType::Question
    }

    pub fn is_answer(&self) -> bool {
        self.post_type == PostType::Answer
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UserRecord {
    pub id: i64,
    pub creation_date: Timestamp,
    pub reputation: u64,
    pub display_name: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VoteRecord {
    pub id: u64,
    pub post_id: u64,
    pub vote_type: VoteType,
    /// The dump truncates vote times to date granularity.
    pub creation_date: Timestamp,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CommentRecord {
    pub id: u64,
    pub post_id: u64,
    pub score: i64,
    pub creation_date: Timestamp,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BadgeRecord {
    pub id: u64,
    pub user_id: u64,
    pub name: String,
    pub award_date: Timestamp,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PostHistoryRecord {
    pub id: u64,
    pub post_id: u64,
    pub history_type: HistoryType,
    pub creation_date: Timestamp,
    /// Carries the close-reason text for `PostClosed` events.
    pub comment: Option<String>,
}

/// One `<row>` element's attributes, unescaped, in document order.
#[derive(Debug, Default)]
pub struct Row {
    attrs: Vec<(String, String)>,
}

impl Row {
    pub fn new(attrs: Vec<(String, String)>) -> Self {
        Row { attrs }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.attrs
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    fn req(&self, key: &str) -> Result<&str, String> {
        self.get(key).ok_or_else(|| format!("missing attribute `{key}`"))
    }

    fn req_parse<T: std::str::FromStr>(&self, key: &str) -> Result<T, String> {
        let raw = self.req(key)?;
        raw.parse()
            .map_err(|_| format!("attribute `{key}` has invalid value `{raw}`"))
    }

    fn opt_parse<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, String> {
        match self.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|_| format!("attribute `{key}` has invalid value `{raw}`")),
        }
    }

    fn req_timestamp(&self, key: &str) -> Result<Timestamp, String> {
        parse_timestamp(self.req(key)?)
    }
}

/// Which dump table a file holds. Tables are identified by their
/// conventional file names inside a snapshot directory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FileKind {
    Posts,
    Users,
    Votes,
    Comments,
    Badges,
    PostHistory,
}

impl FileKind {
    pub fn file_name(self) -> &'static str {
        match self {
            FileKind::Posts => "Posts.xml",
            FileKind::Users => "Users.xml",
            FileKind::Votes => "Votes.xml",
            FileKind::Comments => "Comments.xml",
            FileKind::Badges => "Badges.xml",
            FileKind::PostHistory => "PostHistory.xml",
        }
    }
}

/// A record type that can be built from one dump row.
pub trait DumpRecord: Sized + Send {
    const KIND: FileKind;

    /// Builds the record, validating its invariants. The error string is the
    /// per-row reason surfaced on the malformed-row channel.
    fn from_row(row: &Row) -> Result<Self, String>;
}

fn check_genesis(ts: Timestamp) -> Result<Timestamp, String> {
    if ts.date() < SITE_GENESIS {
        return Err(format!("creation date {ts} precedes site genesis"));
    }
    Ok(ts)
}

fn positive(id: u64, key: &str) -> Result<u64, String> {
    if id == 0 {
        return Err(format!("attribute `{key}` must be positive"));
    }
    Ok(id)
}

impl DumpRecord for PostRecord {
    const KIND: FileKind = FileKind::Posts;

    fn from_row(row: &Row) -> Result<Self, String> {
        let id = positive(row.req_parse("Id")?, "Id")?;
        let post_type = PostType::from_code(row.req_parse("PostTypeId")?);
        let creation_date = check_genesis(row.req_timestamp("CreationDate")?)?;
        let score = row.req_parse("Score")?;
        let body = row.req("Body")?.to_owned();
        let title = row.get("Title").map(str::to_owned);
        let tags = match row.get("Tags") {
            Some(raw) => parse_tags(raw).map_err(|e| e.to_string())?,
            None => Vec::new(),
        };
        let parent_id = row.opt_parse("ParentId")?;

        match post_type {
            PostType::Question => {
                if parent_id.is_some() {
                    return Err("question row carries ParentId".into());
                }
                if tags.len() > 5 {
                    return Err(format!("question row has {} tags (limit 5)", tags.len()));
                }
            }
            PostType::Answer => {
                if parent_id.is_none() {
                    return Err("answer row lacks ParentId".into());
                }
                if title.is_some() {
                    return Err("answer row carries Title".into());
                }
                if !tags.is_empty() {
                    return Err("answer row carries Tags".into());
                }
            }
            PostType::Other(_) => {}
        }

        Ok(PostRecord {
            id,
            post_type,
            creation_date,
            score,
            view_count: row.opt_parse("ViewCount")?,
            body,
            owner_user_id: row.opt_parse("OwnerUserId")?,
            title,
            tags,
            answer_count: row.opt_parse("AnswerCount")?,
            comment_count: row.opt_parse("CommentCount")?,
            favorite_count: row.opt_parse("FavoriteCount")?,
            accepted_answer_id: row.opt_parse("AcceptedAnswerId")?,
            parent_id,
        })
    }
}

impl DumpRecord for UserRecord {
    const KIND: FileKind = FileKind::Users;

    fn from_row(row: &Row) -> Result<Self, String> {
        let id: i64 = row.req_parse("Id")?;
        let reputation: u64 = row.req_parse("Reputation")?;
        // Registered accounts have a reputation floor of 1; only the synthetic
        // community user (negative id) may sit below it.
        if id > 0 && reputation == 0 {
            return Err("registered user with zero reputation".into());
        }
        Ok(UserRecord {
            id,
            creation_date: row.req_timestamp("CreationDate")?,
            reputation,
            display_name: row.req("DisplayName")?.to_owned(),
        })
    }
}

impl DumpRecord for VoteRecord {
    const KIND: FileKind = FileKind::Votes;

    fn from_row(row: &Row) -> Result<Self, String> {
        Ok(VoteRecord {
            id: positive(row.req_parse("Id")?, "Id")?,
            post_id: positive(row.req_parse("PostId")?, "PostId")?,
            vote_type: VoteType::from_code(row.req_parse("VoteTypeId")?),
            creation_date: row.req_timestamp("CreationDate")?,
        })
    }
}

impl DumpRecord for CommentRecord {
    const KIND: FileKind = FileKind::Comments;

    fn from_row(row: &Row) -> Result<Self, String> {
        Ok(CommentRecord {
            id: positive(row.req_parse("Id")?, "Id")?,
            post_id: positive(row.req_parse("PostId")?, "PostId")?,
            score: row.req_parse("Score")?,
            creation_date: row.req_timestamp("CreationDate")?,
            text: row.req("Text")?.to_owned(),
        })
    }
}

impl DumpRecord for BadgeRecord {
    const KIND: FileKind = FileKind::Badges;

    fn from_row(row: &Row) -> Result<Self, String> {
        Ok(BadgeRecord {
            id: positive(row.req_parse("Id")?, "Id")?,
            user_id: positive(row.req_parse("UserId")?, "UserId")?,
            name: row.req("Name")?.to_owned(),
            award_date: row.req_timestamp("Date")?,
        })
    }
}

impl DumpRecord for PostHistoryRecord {
    const KIND: FileKind = FileKind::PostHistory;

    fn from_row(row: &Row) -> Result<Self, String> {
        Ok(PostHistoryRecord {
            id: positive(row.req_parse("Id")?, "Id")?,
            post_id: positive(row.req_parse("PostId")?, "PostId")?,
            history_type: HistoryType::from_code(row.req_parse("PostHistoryTypeId")?),
            creation_date: row.req_timestamp("CreationDate")?,
            comment: row.get("Comment").map(str::to_owned),
        })
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TagParseError {
    #[error("unbalanced tag brackets in `{0}`")]
    Unbalanced(String),
    #[error("text outside tag brackets in `{0}`")]
    StrayText(String),
    #[error("empty tag in `{0}`")]
    EmptyTag(String),
}

/// Splits the dump's angle-bracket tag encoding (`"<c#><.net>"`) into an
/// ordered list of lowercase tag names. The empty string is an empty list.
pub fn parse_tags(raw: &str) -> Result<Vec<String>, TagParseError> {
    let mut tags = Vec::new();
    let mut current: Option<String> = None;
    for ch in raw.chars() {
        match (ch, &mut current) {
            ('<', None) => current = Some(String::new()),
            ('<', Some(_)) => return Err(TagParseError::Unbalanced(raw.to_owned())),
            ('>', Some(tag)) => {
                if tag.is_empty() {
                    return Err(TagParseError::EmptyTag(raw.to_owned()));
                }
                tags.push(std::mem::take(tag).to_lowercase());
                current = None;
            }
            ('>', None) => return Err(TagParseError::Unbalanced(raw.to_owned())),
            (_, Some(tag)) => tag.push(ch),
            (_, None) => return Err(TagParseError::StrayText(raw.to_owned())),
        }
    }
    if current.is_some() {
        return Err(TagParseError::Unbalanced(raw.to_owned()));
    }
    Ok(tags)
}
