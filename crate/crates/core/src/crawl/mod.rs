//! Crawl engine: frontier, fetchers, repository and the crawl loop.

pub mod config;
pub mod corpus;
pub mod engine;
pub mod fetch;
pub mod frontier;
pub mod repository;
pub mod robots;

use std::path::Path;

use crate::taxonomy::TaxonomyError;
use crate::tgraph::TGraphError;

pub use config::{parse_seeds, read_seeds, CrawlConfig, FetchMode, Strategy};
pub use corpus::{write_manifest, Corpus, ManifestEntry};
pub use engine::{run_crawl, CrawlSummary, Crawler, StepReport};
pub use fetch::{CorpusFetcher, FetchOutcome, FetchResponse, Fetcher, LiveFetcher, OutcomeSummary};
pub use frontier::{Frontier, FrontierItem, PriorityOutOfRange};
pub use repository::{read_log, CrawlRecord, Repository, StoreError, LOG_FILE};
pub use robots::RobotsRules;

#[derive(Debug, thiserror::Error)]
pub enum CrawlError {
    #[error("{0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Taxonomy(#[from] TaxonomyError),
    #[error(transparent)]
    TGraph(#[from] TGraphError),
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error(transparent)]
    Priority(#[from] PriorityOutOfRange),
}

impl CrawlError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        CrawlError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    /// Whether the error happened after crawling started.
    pub fn is_runtime(&self) -> bool {
        matches!(self, CrawlError::Store(_) | CrawlError::Priority(_))
    }
}
