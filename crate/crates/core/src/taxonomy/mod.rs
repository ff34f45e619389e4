//! Dewey Decimal taxonomy: code parsing, stemming, and term lookup.
//!
//! Taxonomy files are UTF-8 TSV, one entry per line:
//!
//! ```text
//! 420<TAB>English & Old English<TAB>english,old english
//! ```

mod dnumber;
mod porter;

use std::collections::{BTreeSet, HashMap};
use std::path::Path;

pub use dnumber::{truncate_code, DNumber, InvalidDNumber};
pub use porter::stem;

use crate::text::tokenize;

#[derive(Debug, thiserror::Error)]
pub enum TaxonomyError {
    #[error("empty taxonomy")]
    Empty,
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("empty topic profile")]
    EmptyProfile,
}

/// Stems a single token (lower-cased first).
pub fn stem_token(word: &str) -> String {
    stem(word)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TaxonomyEntry {
    pub code: DNumber,
    pub label: String,
    /// Stemmed, lower-cased terms; phrases keep their words space-joined.
    pub terms: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermHit {
    /// Position of the first token of the matched word or phrase.
    pub position: usize,
    /// Number of tokens consumed by the match.
    pub len: usize,
    pub codes: BTreeSet<DNumber>,
}

#[derive(Debug, Clone, Default)]
pub struct Taxonomy {
    entries: Vec<TaxonomyEntry>,
    term_index: HashMap<String, BTreeSet<DNumber>>,
    max_phrase_len: usize,
}

fn normalize_term(raw: &str) -> Option<String> {
    let stems: Vec<String> = tokenize(raw).iter().map(|t| stem(t)).collect();
    (!stems.is_empty()).then(|| stems.join(" "))
}

/// English-language codes plus a spread of unrelated subjects, in the
/// format read by [`Taxonomy::parse`].
pub const BUNDLED_TAXONOMY: &str = include_str!("../../data/ddc_english.tsv");

impl Taxonomy {
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_TAXONOMY).expect("bundled taxonomy parses")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, TaxonomyError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| TaxonomyError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, TaxonomyError> {
        let mut taxonomy = Taxonomy::default();
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let trimmed = line.trim_end_matches('\r');
            if trimmed.trim().is_empty() || trimmed.trim_start().starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = trimmed.split('\t').collect();
            if cols.len() != 3 {
                return Err(TaxonomyError::Malformed {
                    line: line_no,
                    message: format!("expected 3 tab-separated columns, found {}", cols.len()),
                });
            }
            let code: DNumber = cols[0].parse().map_err(|e: InvalidDNumber| {
                TaxonomyError::Malformed {
                    line: line_no,
                    message: e.to_string(),
                }
            })?;
            let terms = cols[2].split(',').filter_map(normalize_term).collect();
            taxonomy.push(TaxonomyEntry {
                code,
                label: cols[1].trim().to_string(),
                terms,
            });
        }
        if taxonomy.entries.is_empty() {
            return Err(TaxonomyError::Empty);
        }
        Ok(taxonomy)
    }

    /// Builds a taxonomy from `(code, label, raw terms)` triples. Terms are
    /// normalized the same way as when loading from a file.
    pub fn from_entries<'a>(
        entries: impl IntoIterator<Item = (DNumber, &'a str, &'a [&'a str])>,
    ) -> Self {
        let mut taxonomy = Taxonomy::default();
        for (code, label, raw_terms) in entries {
            let terms = raw_terms.iter().filter_map(|t| normalize_term(t)).collect();
            taxonomy.push(TaxonomyEntry {
                code,
                label: label.to_string(),
                terms,
            });
        }
        taxonomy
    }

    fn push(&mut self, mut entry: TaxonomyEntry) {
        let mut seen = BTreeSet::new();
        entry.terms.retain(|t| seen.insert(t.clone()));
        for term in &entry.terms {
            let words = term.split(' ').count();
            self.max_phrase_len = self.max_phrase_len.max(words);
            self.term_index
                .entry(term.clone())
                .or_default()
                .insert(entry.code.clone());
        }
        self.entries.push(entry);
    }

    pub fn entries(&self) -> &[TaxonomyEntry] {
        &self.entries
    }

    pub fn max_phrase_len(&self) -> usize {
        self.max_phrase_len
    }

    /// Codes for an already stemmed term or space-joined phrase.
    pub fn codes_for(&self, stemmed: &str) -> Option<&BTreeSet<DNumber>> {
        self.term_index.get(stemmed)
    }

    /// Greedy longest-phrase-first scan over lower-cased tokens. A matched
    /// phrase consumes its words, so they are not matched again on their own.
    pub fn lookup_terms<S: AsRef<str>>(&self, tokens: &[S]) -> Vec<TermHit> {
        let stems: Vec<String> = tokens.iter().map(|t| stem(t.as_ref())).collect();
        let mut hits = Vec::new();
        let mut pos = 0;
        while pos < stems.len() {
            let longest = self.max_phrase_len.min(stems.len() - pos);
            let found = (1..=longest).rev().find_map(|len| {
                let key = stems[pos..pos + len].join(" ");
                self.term_index.get(&key).map(|codes| (len, codes))
            });
            match found {
                Some((len, codes)) => {
                    hits.push(TermHit {
                        position: pos,
                        len,
                        codes: codes.clone(),
                    });
                    pos += len;
                }
                None => pos += 1,
            }
        }
        hits
    }
}

/// Free-function form of [`Taxonomy::lookup_terms`].
pub fn lookup_terms<S: AsRef<str>>(tokens: &[S], taxonomy: &Taxonomy) -> Vec<TermHit> {
    taxonomy.lookup_terms(tokens)
}

pub fn load_taxonomy(path: impl AsRef<Path>) -> Result<Taxonomy, TaxonomyError> {
    Taxonomy::load(path)
}

/// The set of truncated codes a crawler specializes in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopicProfile {
    codes: BTreeSet<DNumber>,
}

/// English language and grammar: the twenty base codes the reference
/// crawler was configured with.
pub const ENGLISH_LANGUAGE_CODES: [&str; 20] = [
    "400", "403", "410", "412", "413", "414", "415", "417", "418", "419", "420", "421", "422",
    "423", "425", "427", "428", "429", "490", "820",
];

impl TopicProfile {
    pub fn new(
        codes: impl IntoIterator<Item = DNumber>,
        max_len: usize,
    ) -> Result<Self, TaxonomyError> {
        let codes: BTreeSet<DNumber> = codes.into_iter().map(|c| c.truncate(max_len)).collect();
        if codes.is_empty() {
            return Err(TaxonomyError::EmptyProfile);
        }
        Ok(TopicProfile { codes })
    }

    pub fn english_language(max_len: usize) -> Self {
        Self::new(
            ENGLISH_LANGUAGE_CODES.iter().map(|c| c.parse().unwrap()),
            max_len,
        )
        .expect("non-empty")
    }

    /// One code per line, `#` comments allowed.
    pub fn parse(text: &str, max_len: usize) -> Result<Self, TaxonomyError> {
        let mut codes = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let code = line
                .split('\t')
                .next()
                .unwrap_or(line)
                .parse()
                .map_err(|e: InvalidDNumber| TaxonomyError::Malformed {
                    line: idx + 1,
                    message: e.to_string(),
                })?;
            codes.push(code);
        }
        Self::new(codes, max_len)
    }

    pub fn codes(&self) -> &BTreeSet<DNumber> {
        &self.codes
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> DNumber {
        s.parse().unwrap()
    }

    const CLOTHING: &str = "\
# clothing belongs to several disciplines
155.95\tclothing psychology\tclothing
391\tcostume & personal appearance\tclothing,costume
746.92\tcostume design\tclothing,fashion design
";

    #[test]
    fn loads_english_entry() {
        let tax = Taxonomy::parse("420\tEnglish & Old English\tenglish,old english\n").unwrap();
        assert!(tax.codes_for("english").unwrap().contains(&d("420")));
        assert!(tax.codes_for("old english").is_some());
        assert_eq!(tax.max_phrase_len(), 2);
    }

    #[test]
    fn empty_file_is_an_error() {
        let err = Taxonomy::parse("").unwrap_err();
        assert_eq!(err.to_string(), "empty taxonomy");
        assert!(matches!(
            Taxonomy::parse("# only a comment\n\n"),
            Err(TaxonomyError::Empty)
        ));
    }

    #[test]
    fn malformed_lines_name_the_line() {
        let err = Taxonomy::parse("420\tEnglish\tenglish\n42x\tbad\tbad\n").unwrap_err();
        assert!(matches!(err, TaxonomyError::Malformed { line: 2, .. }), "{err}");
        let err = Taxonomy::parse("420\tEnglish only two columns\n").unwrap_err();
        assert!(matches!(err, TaxonomyError::Malformed { line: 1, .. }));
    }

    #[test]
    fn clothing_maps_to_three_codes() {
        let tax = Taxonomy::parse(CLOTHING).unwrap();
        let hits = tax.lookup_terms(&["clothing"]);
        assert_eq!(hits.len(), 1);
        let codes: Vec<_> = hits[0].codes.iter().map(|c| c.to_string()).collect();
        assert_eq!(codes, ["155.95", "391", "746.92"]);
    }

    #[test]
    fn duplicate_term_code_pairs_collapse() {
        let tax = Taxonomy::parse("420\tEnglish\tenglish,English,english\n").unwrap();
        assert_eq!(tax.entries()[0].terms, ["english"]);
        assert_eq!(tax.codes_for("english").unwrap().len(), 1);
    }

    #[test]
    fn phrase_beats_words() {
        let tax = Taxonomy::parse("419\tSign languages\tsign languages\n400\tLanguage\tlanguage\n")
            .unwrap();
        let hits = tax.lookup_terms(&["sign", "languages"]);
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].position, 0);
        assert_eq!(hits[0].len, 2);
        assert_eq!(hits[0].codes, BTreeSet::from([d("419")]));
        // Without the phrase, the word on its own still matches.
        let hits = tax.lookup_terms(&["languages", "sign"]);
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].codes, BTreeSet::from([d("400")]));
    }

    #[test]
    fn unknown_tokens_produce_nothing() {
        let tax = Taxonomy::parse(CLOTHING).unwrap();
        assert!(tax.lookup_terms(&["qwxyz"]).is_empty());
        assert!(tax.lookup_terms::<&str>(&[]).is_empty());
    }

    #[test]
    fn profile_truncates_and_rejects_empty() {
        let p = TopicProfile::parse("420\n155.95\n# x\n", 3).unwrap();
        assert!(p.codes().contains(&d("155")));
        assert!(matches!(
            TopicProfile::parse("#nothing\n", 3),
            Err(TaxonomyError::EmptyProfile)
        ));
        assert_eq!(TopicProfile::english_language(3).codes().len(), 20);
    }
}
