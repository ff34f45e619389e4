use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::text::stemmed_tokens;

/// Sparse stemmed term-frequency vector, sorted by term.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TermVector {
    terms: Vec<(String, f64)>,
    norm: f64,
}

impl TermVector {
    pub fn from_text(text: &str) -> Self {
        Self::from_stems(stemmed_tokens(text))
    }

    pub fn from_stems(stems: impl IntoIterator<Item = String>) -> Self {
        let mut counts: BTreeMap<String, f64> = BTreeMap::new();
        for s in stems {
            *counts.entry(s).or_default() += 1.0;
        }
        Self::from_counts(counts)
    }

    pub fn from_counts(counts: BTreeMap<String, f64>) -> Self {
        let terms: Vec<(String, f64)> = counts.into_iter().filter(|(_, c)| *c > 0.0).collect();
        let norm = terms.iter().map(|(_, c)| c * c).sum::<f64>().sqrt();
        TermVector { terms, norm }
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn get(&self, term: &str) -> f64 {
        self.terms
            .binary_search_by(|(t, _)| t.as_str().cmp(term))
            .map(|i| self.terms[i].1)
            .unwrap_or(0.0)
    }

    fn dot(&self, other: &TermVector) -> f64 {
        let (mut i, mut j) = (0, 0);
        let mut sum = 0.0;
        while i < self.terms.len() && j < other.terms.len() {
            match self.terms[i].0.cmp(&other.terms[j].0) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    sum += self.terms[i].1 * other.terms[j].1;
                    i += 1;
                    j += 1;
                }
            }
        }
        sum
    }
}

/// Cosine similarity of two term-frequency vectors; 0 when either is empty.
pub fn text_similarity(a: &TermVector, b: &TermVector) -> f64 {
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    (a.dot(b) / (a.norm * b.norm)).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tf(pairs: &[(&str, f64)]) -> TermVector {
        TermVector::from_counts(pairs.iter().map(|(t, c)| (t.to_string(), *c)).collect())
    }

    #[test]
    fn identity_and_orthogonality() {
        let a = TermVector::from_text("english grammar rules");
        assert!((text_similarity(&a, &a) - 1.0).abs() < 1e-12);
        let b = TermVector::from_text("football match");
        assert_eq!(text_similarity(&a, &b), 0.0);
        assert_eq!(text_similarity(&TermVector::default(), &TermVector::default()), 0.0);
    }

    #[test]
    fn hand_computed_cosine() {
        let a = tf(&[("x", 1.0)]);
        let b = tf(&[("x", 1.0), ("y", 1.0)]);
        assert!((text_similarity(&a, &b) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn stems_before_counting() {
        let v = TermVector::from_text("Languages language LANGUAGE");
        assert_eq!(v.len(), 1);
        assert_eq!(v.get("languag"), 3.0);
    }
}
