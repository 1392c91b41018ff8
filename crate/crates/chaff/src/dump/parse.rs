//! Single-pass row-stream parser over dump XML.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::marker::PhantomData;
use std::path::Path;

use quick_xml::events::{BytesStart, Event};
use quick_xml::Reader;

use super::record::{DumpRecord, Row};
use super::DumpError;

/// A row that could not be turned into a record. Carried on the stream so
/// callers can count and log failures instead of losing them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MalformedRow {
    /// 1-based index among the document's `<row>` elements.
    pub row_number: u64,
    /// Byte offset in the input where the row ended.
    pub position: u64,
    pub reason: String,
}

/// One item of a record stream: either a parsed record or a recoverable
/// per-row failure.
#[derive(Debug)]
pub enum RowItem<T> {
    Record(T),
    Malformed(MalformedRow),
}

/// Lazy iterator over the `<row>` elements of one dump file.
///
/// Yields records in file order. Per-row failures appear as
/// [`RowItem::Malformed`]; a structural XML failure yields one
/// [`DumpError::MalformedDocument`] and then the stream fuses.
pub struct RecordStream<R: BufRead, T: DumpRecord> {
    reader: Reader<R>,
    buf: Vec<u8>,
    rows_seen: u64,
    done: bool,
    _record: PhantomData<T>,
}

/// Starts a streaming parse of one dump table.
///
/// The target record type selects the table schema:
/// `parse_stream::<PostRecord, _>(reader)` parses a Posts file, and so on
/// for the other five [`DumpRecord`] implementations.
pub fn parse_stream<T: DumpRecord, R: BufRead>(reader: R) -> RecordStream<R, T> {
    RecordStream {
        reader: Reader::from_reader(reader),
        buf: Vec::new(),
        rows_seen: 0,
        done: false,
        _record: PhantomData,
    }
}

/// Opens a dump file on disk and streams it.
pub fn open_dump<T: DumpRecord>(
    path: &Path,
) -> std::io::Result<RecordStream<BufReader<File>, T>> {
    Ok(parse_stream(BufReader::new(File::open(path)?)))
}

/// Drains a stream, splitting records from malformed rows.
pub fn read_all<T: DumpRecord, R: BufRead>(
    reader: R,
) -> Result<(Vec<T>, Vec<MalformedRow>), DumpError> {
    let mut records = Vec::new();
    let mut malformed = Vec::new();
    for item in parse_stream::<T, R>(reader) {
        match item? {
            RowItem::Record(r) => records.push(r),
            RowItem::Malformed(m) => malformed.push(m),
        }
    }
    Ok((records, malformed))
}

impl<R: BufRead, T: DumpRecord> RecordStream<R, T> {
    fn row_from_start(&mut self, start: &BytesStart) -> RowItem<T> {
        self.rows_seen += 1;
        let mut attrs = Vec::new();
        for attr in start.attributes() {
            let attr = match attr {
                Ok(a) => a,
                Err(e) => return self.malformed(format!("bad attribute: {e}")),
            };
            let key = String::from_utf8_lossy(attr.key.as_ref()).into_owned();
            let value = match attr.normalized_value(quick_xml::XmlVersion::default()) {
                Ok(v) => v.into_owned(),
                Err(e) => return self.malformed(format!("bad value for `{key}`: {e}")),
            };
            attrs.push((key, value));
        }
        match T::from_row(&Row::new(attrs)) {
            Ok(record) => RowItem::Record(record),
            Err(reason) => self.malformed(reason),
        }
    }

    fn malformed(&self, reason: String) -> RowItem<T> {
        RowItem::Malformed(MalformedRow {
            row_number: self.rows_seen,
            position: self.reader.buffer_position(),
            reason,
        })
    }
}

impl<R: BufRead, T: DumpRecord> Iterator for RecordStream<R, T> {
    type Item = Result<RowItem<T>, DumpError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        loop {
            self.buf.clear();
            match self.reader.read_event_into(&mut self.buf) {
                Ok(Event::Empty(ref e)) | Ok(Event::Start(ref e))
                    if e.name().as_ref() == b"row" =>
                {
                    let start = e.to_owned();
                    return Some(Ok(self.row_from_start(&start)));
                }
                Ok(Event::Eof) => {
                    self.done = true;
                    return None;
                }
                Ok(_) => continue,
                Err(e) => {
                    self.done = true;
                    return Some(Err(DumpError::MalformedDocument {
                        position: self.reader.buffer_position(),
                        reason: e.to_string(),
                    }));
                }
            }
        }
    }
}
