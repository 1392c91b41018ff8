//! Stream-parse a dump document into typed records.
//!
//! Shows the three parsing surfaces: the lazy record stream with its
//! malformed-row channel, tag-list decoding, and HTML body stripping.
//!
//! Run with: `cargo run -p chaff --example parse_dump`

use chaff::dump::{parse_stream, parse_tags, strip_html, PostRecord, RowItem};

const POSTS: &str = r#"<?xml version="1.0" encoding="utf-8"?>
<posts>
  <row Id="1" PostTypeId="1" CreationDate="2011-03-01T09:30:00.000" Score="-4"
       Body="&lt;p&gt;plzz can u help me fast&lt;/p&gt;" OwnerUserId="101"
       Title="plzz can u help me" Tags="&lt;homework&gt;&lt;java&gt;" ViewCount="3" />
  <row Id="2" PostTypeId="1" CreationDate="2011-03-02T14:00:00.000" Score="12"
       Body="&lt;p&gt;See &lt;a href=&quot;http://example.com/docs&quot;&gt;the docs&lt;/a&gt;:&lt;/p&gt;&lt;pre&gt;&lt;code&gt;let x = 1;&lt;/code&gt;&lt;/pre&gt;"
       OwnerUserId="102" Title="How do I bind a lifetime?" Tags="&lt;rust&gt;" ViewCount="4810" />
  <row Id="3" PostTypeId="2" CreationDate="2011-03-02T14:20:00.000" Score="5"
       Body="&lt;p&gt;Like this.&lt;/p&gt;" OwnerUserId="103" ParentId="2" />
  <row Id="4" PostTypeId="1" CreationDate="not-a-date" Score="0" Body="broken row" />
</posts>"#;

fn main() {
    let mut records = Vec::new();
    let mut malformed = Vec::new();
    for item in parse_stream::<PostRecord, _>(POSTS.as_bytes()) {
        match item.expect("document is structurally sound") {
            RowItem::Record(record) => records.push(record),
            RowItem::Malformed(row) => malformed.push(row),
        }
    }

    println!("parsed {} records, {} malformed rows\n", records.len(), malformed.len());
    for post in &records {
        let stripped = strip_html(&post.body);
        println!(
            "#{} [{:?}] score {:+}  tags {:?}",
            post.id, post.post_type, post.score, post.tags
        );
        println!("    text: {:?}", stripped.text);
        if !stripped.code_blocks.is_empty() {
            println!("    code: {:?}", stripped.code_blocks);
        }
        if stripped.url_count > 0 {
            println!("    urls: {}", stripped.url_count);
        }
    }
    for row in &malformed {
        println!("\nmalformed row {} at byte {}: {}", row.row_number, row.position, row.reason);
    }

    // The dump encodes tag lists as angle-bracket runs.
    let tags = parse_tags("<C#><.net><regex>").unwrap();
    println!("\ndecoded tag run: {tags:?}");
}
