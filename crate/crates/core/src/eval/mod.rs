//! Evaluation: labels, harvest and recall/precision metrics, synthetic
//! corpora and strategy comparison.

mod compare;
mod gen;
mod labels;
mod metrics;

use std::path::Path;

use crate::crawl::{CrawlError, StoreError};

pub use compare::{compare_strategies, write_comparison_csv, Comparison, StrategyRun};
pub use gen::{default_pools, gen_corpus, CorpusSpec, GeneratedCorpus};
pub use labels::LabelSet;
pub use metrics::{
    harvest_series, read_series_csv, recall_precision, series_csv, write_series_csv, Block,
    Metric, MetricsSeries, DEFAULT_BLOCK_SIZE,
};

#[derive(Debug, thiserror::Error)]
pub enum EvalError {
    #[error("block size must be at least 1")]
    BlockSize,
    #[error("crawl log is empty")]
    EmptyLog,
    #[error("label set is empty")]
    EmptyLabels,
    #[error("no labeled overlap")]
    NoLabeledOverlap,
    #[error("labels line {line}: {message}")]
    Labels { line: usize, message: String },
    #[error("corpus spec: {0}")]
    Spec(String),
    #[error("{0}")]
    Csv(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Log(#[from] StoreError),
    #[error("{strategy} run: {source}")]
    Crawl {
        strategy: String,
        source: CrawlError,
    },
}

impl EvalError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        EvalError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}
