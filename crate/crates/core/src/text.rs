//! Tokenization shared by the HTML model, the taxonomy and the similarity code.

use crate::taxonomy::stem;

/// Splits on anything that is not alphanumeric and lower-cases each piece.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

/// Tokenizes and stems.
pub fn stemmed_tokens(text: &str) -> Vec<String> {
    tokenize(text).iter().map(|t| stem(t)).collect()
}
