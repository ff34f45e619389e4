use std::collections::BTreeMap;
use std::path::Path;

use crate::pagemodel::normalize_url;

use super::EvalError;

/// Ground truth: normalized URL to on-topic flag.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LabelSet {
    labels: BTreeMap<String, bool>,
}

impl LabelSet {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, EvalError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| EvalError::io(path, e))?;
        Self::parse(&text)
    }

    /// `url \t 0|1` per line; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self, EvalError> {
        let mut set = LabelSet::default();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |message: String| EvalError::Labels {
                line: idx + 1,
                message,
            };
            let (url, flag) = line
                .split_once('\t')
                .ok_or_else(|| bad("expected url<TAB>0|1".into()))?;
            let flag = match flag.trim() {
                "1" => true,
                "0" => false,
                other => return Err(bad(format!("label must be 0 or 1, got {other:?}"))),
            };
            let url = normalize_url(url.trim(), url.trim()).map_err(|e| bad(e.to_string()))?;
            set.labels.insert(url, flag);
        }
        Ok(set)
    }

    pub fn insert(&mut self, url: &str, on_topic: bool) {
        let url = normalize_url(url, url).unwrap_or_else(|_| url.to_string());
        self.labels.insert(url, on_topic);
    }

    pub fn get(&self, url: &str) -> Option<bool> {
        self.labels.get(url).copied()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, bool)> {
        self.labels.iter().map(|(u, &b)| (u.as_str(), b))
    }

    pub fn to_tsv(&self) -> String {
        self.iter()
            .map(|(u, b)| format!("{u}\t{}\n", b as u8))
            .collect()
    }
}

impl FromIterator<(String, bool)> for LabelSet {
    fn from_iter<I: IntoIterator<Item = (String, bool)>>(iter: I) -> Self {
        let mut set = LabelSet::default();
        for (u, b) in iter {
            set.insert(&u, b);
        }
        set
    }
}
