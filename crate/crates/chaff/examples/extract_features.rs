//! Extract the 47 creation-time features for one question.
//!
//! The author index holds the author's full record set; the extractor only
//! looks at items dated strictly before the question's creation, so later
//! activity can never leak into the vector.
//!
//! Run with: `cargo run -p chaff --example extract_features`

use chaff::dump::{parse_timestamp, BadgeRecord, PostRecord, PostType, UserRecord};
use chaff::features::{extract_all, AuthorIndex, FeatureSet, Label, FEATURE_NAMES, FEATURE_SETS};
use chaff::lexicon::Lexicon;

fn post(id: u64, kind: PostType, created: &str, score: i64, parent: Option<u64>) -> PostRecord {
    PostRecord {
        id,
        post_type: kind,
        creation_date: parse_timestamp(created).unwrap(),
        score,
        view_count: Some(40),
        body: "<p>earlier post</p>".into(),
        owner_user_id: Some(7),
        title: matches!(kind, PostType::Question).then(|| format!("q{id}")),
        tags: if matches!(kind, PostType::Question) {
            vec!["rust".into(), "parsing".into()]
        } else {
            vec![]
        },
        answer_count: None,
        comment_count: Some(2),
        favorite_count: Some(1),
        accepted_answer_id: None,
        parent_id: parent,
    }
}

fn main() {
    let user = UserRecord {
        id: 7,
        creation_date: parse_timestamp("2010-11-21T08:00:00").unwrap(),
        reputation: 321,
        display_name: "avid asker".into(),
    };
    let history = vec![
        post(100, PostType::Question, "2010-12-01T10:00:00", 3, None),
        post(101, PostType::Question, "2011-01-15T10:00:00", 0, None),
        post(102, PostType::Answer, "2011-02-01T10:00:00", -1, Some(100)),
        post(103, PostType::Answer, "2011-02-20T10:00:00", 4, Some(100)),
        // Dated after the question below: invisible to the extractor.
        post(104, PostType::Answer, "2012-01-01T10:00:00", 50, Some(100)),
    ];
    let badges = vec![BadgeRecord {
        id: 1,
        user_id: 7,
        name: "Editor".into(),
        award_date: parse_timestamp("2011-01-02T00:00:00").unwrap(),
    }];
    let index = AuthorIndex::build([user], history, badges);

    let question = PostRecord {
        id: 500,
        post_type: PostType::Question,
        creation_date: parse_timestamp("2011-05-01T12:00:00").unwrap(),
        score: 0,
        view_count: None,
        body: "<p>I know the borrow checker rejects this, but why? \
               See http://example.com/play for the full case.</p>\
               <pre><code>let r = &v[0];\nv.push(1);</code></pre>"
            .into(),
        owner_user_id: Some(7),
        title: Some("Why does this borrow fail?".into()),
        tags: vec!["rust".into(), "borrow-checker".into()],
        answer_count: None,
        comment_count: None,
        favorite_count: None,
        accepted_answer_id: None,
        parent_id: None,
    };

    let lexicon = Lexicon::starter();
    let vector = extract_all(&question, &index, &lexicon, Label::Unlabeled).unwrap();

    println!("question {} -> {} features\n", vector.question_id, vector.values.len());
    for set in [FeatureSet::A, FeatureSet::B, FeatureSet::C, FeatureSet::D] {
        println!("set {} ({:?}):", set.as_str(), set);
        for (i, name) in FEATURE_NAMES.iter().enumerate() {
            if FEATURE_SETS[i] == set {
                println!("  {name:<26} {:>10.4}", vector.values[i]);
            }
        }
        println!();
    }
    println!("flags: {:?}", vector.flags);
}
