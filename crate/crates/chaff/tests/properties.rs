//! Property tests for the parsing and scoring invariants.

use proptest::prelude::*;

use chaff::characterize::SampleDistribution;
use chaff::dump::{parse_tags, strip_html};
use chaff::features::count_chars;
use chaff::lexicon::{score, tokenize, Lexicon};

fn tag_name() -> impl Strategy<Value = String> {
    "[a-z0-9.#+-]{1,12}"
}

proptest! {
    /// parse_tags(join(parse_tags(s))) is idempotent for valid inputs.
    #[test]
    fn tags_idempotent(tags in proptest::collection::vec(tag_name(), 0..6)) {
        let raw: String = tags.iter().map(|t| format!("<{t}>")).collect();
        let once = parse_tags(&raw).unwrap();
        let rejoined: String = once.iter().map(|t| format!("<{t}>")).collect();
        prop_assert_eq!(parse_tags(&rejoined).unwrap(), once);
    }

    /// Character classes partition every string exactly.
    #[test]
    fn char_partition(text in ".{0,200}") {
        let c = count_chars(&text);
        prop_assert_eq!(c.alpha + c.digit + c.whitespace + c.punct + c.special, c.total);
        prop_assert!(c.upper + c.lower <= c.alpha);
    }

    /// Code text never leaks into the stripped prose, for generated
    /// paragraph/code documents.
    #[test]
    fn code_stays_out_of_prose(
        paragraphs in proptest::collection::vec("[a-z ]{0,30}", 0..4),
        code in "[A-Z0-9=;]{1,20}",
    ) {
        let mut body = String::new();
        for p in &paragraphs {
            body.push_str(&format!("<p>{p}</p>"));
        }
        body.push_str(&format!("<pre><code>{code}</code></pre>"));
        let out = strip_html(&body);
        prop_assert_eq!(out.code_blocks.len(), 1);
        prop_assert!(!out.text.contains(&code));
    }

    /// Lexicon scores stay in [0, 100], ignore token order, and are
    /// invariant under text duplication.
    #[test]
    fn score_invariants(words in proptest::collection::vec("[a-z]{1,8}", 1..40)) {
        let lexicon = Lexicon::starter();
        let text = words.join(" ");
        let tokens = tokenize(&text);
        let forward = score(&tokens, &lexicon);
        for (_, v) in forward.iter() {
            prop_assert!((0.0..=100.0).contains(&v));
        }
        let mut reversed_tokens = tokens.clone();
        reversed_tokens.reverse();
        prop_assert_eq!(&score(&reversed_tokens, &lexicon), &forward);
        let doubled = score(&tokenize(&format!("{text} {text}")), &lexicon);
        for (cat, v) in forward.iter() {
            prop_assert!((doubled.get(cat) - v).abs() < 1e-12);
        }
    }

    /// Nearest-rank percentiles return actual samples and hit the extremes.
    #[test]
    fn percentile_order_statistics(
        samples in proptest::collection::vec(-1e6f64..1e6, 1..60),
        p in 0.0f64..=100.0,
    ) {
        let dist = SampleDistribution::new(samples.clone());
        let v = dist.percentile(p).unwrap();
        prop_assert!(samples.contains(&v), "percentile is a sample");
        prop_assert_eq!(dist.percentile(0.0), dist.min());
        prop_assert_eq!(dist.percentile(100.0), dist.max());
    }

    /// A token matching a literal entry also matches any prefix stem of it.
    #[test]
    fn stems_subsume_literals(word in "[a-z]{2,10}", cut in 1usize..9) {
        let cut = cut.min(word.len() - 1).max(1);
        let stem = &word[..cut];
        let dictionary = format!("%\n1\tcat\n%\n{word}\t1\n");
        let stemmed = format!("%\n1\tcat\n%\n{stem}*\t1\n");
        let lex_literal = Lexicon::parse(&dictionary).unwrap();
        let lex_stem = Lexicon::parse(&stemmed).unwrap();
        let tokens = tokenize(&word);
        let direct = score(&tokens, &lex_literal);
        let via_stem = score(&tokens, &lex_stem);
        prop_assert_eq!(direct.get("cat"), 100.0);
        prop_assert_eq!(via_stem.get("cat"), 100.0);
    }
}
