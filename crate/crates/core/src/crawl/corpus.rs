//! Local corpus: a JSON-lines manifest mapping URLs to HTML files.

use std::collections::HashMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::pagemodel::normalize_url;

use super::CrawlError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub url: String,
    /// Relative to the manifest's directory.
    pub path: String,
    pub status: u16,
}

#[derive(Debug, Clone, Default)]
pub struct Corpus {
    root: PathBuf,
    entries: HashMap<String, ManifestEntry>,
}

impl Corpus {
    pub fn load(manifest: impl AsRef<Path>) -> Result<Self, CrawlError> {
        let manifest = manifest.as_ref();
        let text = std::fs::read_to_string(manifest).map_err(|e| CrawlError::io(manifest, e))?;
        let root = manifest.parent().unwrap_or(Path::new(".")).to_path_buf();
        Self::parse(&text, root)
    }

    pub fn parse(text: &str, root: PathBuf) -> Result<Self, CrawlError> {
        let mut entries = HashMap::new();
        for (idx, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let mut entry: ManifestEntry = serde_json::from_str(line).map_err(|e| {
                CrawlError::Config(format!("corpus manifest line {}: {e}", idx + 1))
            })?;
            entry.url = normalize_url(&entry.url, &entry.url).map_err(|e| {
                CrawlError::Config(format!("corpus manifest line {}: {e}", idx + 1))
            })?;
            entries.insert(entry.url.clone(), entry);
        }
        Ok(Corpus { root, entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn urls(&self) -> impl Iterator<Item = &String> {
        self.entries.keys()
    }

    pub fn entry(&self, url: &str) -> Option<&ManifestEntry> {
        self.entries.get(url)
    }

    pub fn file_path(&self, entry: &ManifestEntry) -> PathBuf {
        self.root.join(&entry.path)
    }

    /// HTML bytes of a page, if listed and readable.
    pub fn html(&self, url: &str) -> Option<Vec<u8>> {
        let entry = self.entries.get(url)?;
        std::fs::read(self.file_path(entry)).ok()
    }
}

/// Writes manifest entries as JSON lines.
pub fn write_manifest(path: &Path, entries: &[ManifestEntry]) -> Result<(), CrawlError> {
    let mut out = Vec::new();
    for e in entries {
        serde_json::to_writer(&mut out, e).expect("manifest entry serializes");
        out.push(b'\n');
    }
    std::fs::File::create(path)
        .and_then(|mut f| f.write_all(&out))
        .map_err(|e| CrawlError::io(path, e))
}
