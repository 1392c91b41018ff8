//! Score text against the bundled category lexicon.
//!
//! Scores are percentage-of-words per category; a token may match several
//! categories at once. A real dictionary in the percent-delimited format
//! can be loaded with `Lexicon::load` instead.
//!
//! Run with: `cargo run -p chaff --example score_lexicon`

use chaff::lexicon::{describe, score, tokenize, Lexicon};

fn main() {
    let lexicon = Lexicon::starter();
    println!("{}\n", describe(&lexicon));

    let texts = [
        "I need to see this q fast ..pleash",
        "We moved the deployment between regions and it stopped working.",
        "Because I know you understand the reason, please tell them.",
        "int main() { return 0; }",
    ];
    for text in texts {
        let tokens = tokenize(text);
        let scores = score(&tokens, &lexicon);
        println!("{text:?} ({} tokens)", scores.token_count);
        let mut nonzero: Vec<(&str, f64)> = scores.iter().filter(|(_, v)| *v > 0.0).collect();
        nonzero.sort_by(|a, b| b.1.total_cmp(&a.1));
        for (category, value) in nonzero {
            println!("  {category:<8} {value:6.2}");
        }
        println!();
    }
}
