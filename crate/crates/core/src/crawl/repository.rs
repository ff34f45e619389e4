//! Versioned page store and crawl log.
//!
//! Each store of a URL creates a new version; older versions stay readable.
//! With a root directory, HTML goes to `pages/NNNNNN.html` and every record
//! is appended to `crawl_log.jsonl` as it is stored.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::fetch::OutcomeSummary;
use crate::topic::TopicDecision;

pub const LOG_FILE: &str = "crawl_log.jsonl";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrawlRecord {
    pub url: String,
    pub version: u32,
    /// Relative to the repository root; only for successful fetches.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub html_path: Option<String>,
    #[serde(skip)]
    pub html: Option<Vec<u8>>,
    pub page_decision: TopicDecision,
    pub link_scores: Vec<(String, f64)>,
    pub outcome: OutcomeSummary,
    pub stored_at: u64,
}

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("writing {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("integrity audit failed: {0}")]
    Integrity(String),
}

#[derive(Debug, Default)]
pub struct Repository {
    root: Option<PathBuf>,
    log: Option<BufWriter<File>>,
    records: Vec<CrawlRecord>,
    /// Indices into `records`, oldest version first.
    versions: HashMap<String, Vec<usize>>,
}

impl Repository {
    pub fn in_memory() -> Self {
        Repository::default()
    }

    /// Creates `root/pages` and truncates any previous log.
    pub fn on_disk(root: impl AsRef<Path>) -> Result<Self, StoreError> {
        let root = root.as_ref().to_path_buf();
        let pages = root.join("pages");
        std::fs::create_dir_all(&pages).map_err(|e| io_err(&pages, e))?;
        let log_path = root.join(LOG_FILE);
        let log = File::create(&log_path).map_err(|e| io_err(&log_path, e))?;
        Ok(Repository {
            root: Some(root),
            log: Some(BufWriter::new(log)),
            ..Repository::default()
        })
    }

    pub fn log_path(&self) -> Option<PathBuf> {
        self.root.as_ref().map(|r| r.join(LOG_FILE))
    }

    /// Stores a record as the newest version of its URL and returns that
    /// version number.
    pub fn store_page(&mut self, mut record: CrawlRecord) -> Result<u32, StoreError> {
        let history = self.versions.entry(record.url.clone()).or_default();
        let version = history.len() as u32 + 1;
        record.version = version;
        if let (Some(root), Some(html)) = (&self.root, record.html.take()) {
            let rel = format!("pages/{:06}.html", self.records.len() + 1);
            let path = root.join(&rel);
            std::fs::write(&path, html).map_err(|e| io_err(&path, e))?;
            record.html_path = Some(rel);
        }
        if let Some(log) = &mut self.log {
            let write = serde_json::to_writer(&mut *log, &record)
                .map_err(std::io::Error::from)
                .and_then(|_| log.write_all(b"\n"));
            if let Err(e) = write {
                return Err(io_err(&self.root.clone().unwrap_or_default().join(LOG_FILE), e));
            }
        }
        history.push(self.records.len());
        self.records.push(record);
        Ok(version)
    }

    pub fn current(&self, url: &str) -> Option<&CrawlRecord> {
        self.versions.get(url)?.last().map(|&i| &self.records[i])
    }

    pub fn version(&self, url: &str, version: u32) -> Option<&CrawlRecord> {
        let idx = *self.versions.get(url)?.get(version.checked_sub(1)? as usize)?;
        Some(&self.records[idx])
    }

    /// Every stored record, in store order.
    pub fn records(&self) -> &[CrawlRecord] {
        &self.records
    }

    /// Checks that each URL's versions run 1..n without gaps.
    pub fn audit(&self) -> Result<(), StoreError> {
        for (url, history) in &self.versions {
            for (i, &idx) in history.iter().enumerate() {
                let rec = self
                    .records
                    .get(idx)
                    .ok_or_else(|| StoreError::Integrity(format!("{url}: dangling version")))?;
                if rec.url != *url || rec.version as usize != i + 1 {
                    return Err(StoreError::Integrity(format!(
                        "{url}: expected version {}, found {}",
                        i + 1,
                        rec.version
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn flush(&mut self) -> Result<(), StoreError> {
        if let Some(log) = &mut self.log {
            log.flush()
                .map_err(|e| io_err(&self.root.clone().unwrap_or_default().join(LOG_FILE), e))?;
        }
        Ok(())
    }
}

fn io_err(path: &Path, source: std::io::Error) -> StoreError {
    StoreError::Io {
        path: path.display().to_string(),
        source,
    }
}

/// Reads a crawl log written by [`Repository`].
pub fn read_log(path: impl AsRef<Path>) -> Result<Vec<CrawlRecord>, StoreError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(i, line)| {
            serde_json::from_str(line).map_err(|e| {
                io_err(
                    path,
                    std::io::Error::new(std::io::ErrorKind::InvalidData, format!("line {}: {e}", i + 1)),
                )
            })
        })
        .collect()
}
