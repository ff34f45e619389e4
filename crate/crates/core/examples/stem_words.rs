//! Porter stems and taxonomy hits for the words given on the command line.
//!
//!     cargo run --example stem_words -- running grammatical english dictionaries

use focuscrawl::taxonomy::{stem_token, Taxonomy};

fn main() {
    let words: Vec<String> = std::env::args().skip(1).collect();
    let words = if words.is_empty() {
        ["caresses", "ponies", "relational", "grammatical", "english", "clothing"]
            .map(String::from)
            .to_vec()
    } else {
        words
    };
    let taxonomy = Taxonomy::bundled();
    for w in &words {
        let lower = w.to_lowercase();
        let codes: Vec<String> = taxonomy
            .lookup_terms(&[lower.as_str()])
            .into_iter()
            .flat_map(|h| h.codes.into_iter().map(|c| c.to_string()))
            .collect();
        println!("{w:<16} {:<12} {}", stem_token(&lower), codes.join(" "));
    }
}
