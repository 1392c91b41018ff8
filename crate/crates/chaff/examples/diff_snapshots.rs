//! Reconstruct a deleted-question corpus by diffing snapshot catalogs.
//!
//! Questions present in earlier snapshots but absent from the most recent
//! one are the deletion candidates; an exclusion list removes known false
//! captures, and a sidecar file attributes each deletion to its initiator.
//!
//! Run with: `cargo run -p chaff --example diff_snapshots`

use chaff::dump::{parse_timestamp, PostRecord, PostType};
use chaff::snapshot::{
    apply_exclusions, find_deleted, join_initiators, Initiator, InitiatorAnnotation,
    SnapshotCatalog,
};
use chrono::NaiveDate;

fn question(id: u64) -> PostRecord {
    PostRecord {
        id,
        post_type: PostType::Question,
        creation_date: parse_timestamp("2011-01-01T00:00:00").unwrap(),
        score: 0,
        view_count: None,
        body: String::new(),
        owner_user_id: Some(1),
        title: Some(format!("question {id}")),
        tags: vec!["example".into()],
        answer_count: None,
        comment_count: None,
        favorite_count: None,
        accepted_answer_id: None,
        parent_id: None,
    }
}

fn catalog(id: &str, date: &str, ids: &[u64]) -> SnapshotCatalog {
    SnapshotCatalog::build(
        ids.iter().map(|&i| question(i)),
        id,
        NaiveDate::parse_from_str(date, "%Y-%m-%d").unwrap(),
    )
    .unwrap()
}

fn main() {
    // Three observation points of a site where questions come and go.
    let august = catalog("2011-08", "2011-08-01", &[1, 2, 3, 4, 5]);
    let december = catalog("2011-12", "2011-12-01", &[2, 3, 4, 5, 6, 7]);
    let latest = catalog("2012-06", "2012-06-01", &[2, 4, 6, 8]);

    let candidates = find_deleted(&[august, december], &latest).unwrap();
    println!("deletion candidates: {:?}", candidates.ids().collect::<Vec<_>>());
    for id in candidates.ids() {
        println!("  #{id}: last seen in snapshot {}", candidates.provenance(id).unwrap());
    }

    // Question 7 turns out to be a capture error, not a deletion.
    let corpus = apply_exclusions(&candidates, &[7].into());
    println!(
        "\nafter exclusions: {:?} ({} excluded)",
        corpus.ids().collect::<Vec<_>>(),
        corpus.exclusions_applied
    );

    let partition = join_initiators(
        &corpus,
        [
            InitiatorAnnotation { question_id: 1, initiator: Initiator::Moderator },
            InitiatorAnnotation { question_id: 3, initiator: Initiator::Author },
            InitiatorAnnotation { question_id: 999, initiator: Initiator::Author }, // skipped
        ],
    );
    println!(
        "\ninitiators: moderator {:?}, author {:?}, unknown {:?} ({} annotation(s) skipped)",
        partition.moderator, partition.author, partition.unknown, partition.skipped_annotations
    );
}
