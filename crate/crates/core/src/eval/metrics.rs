use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use crate::crawl::{CrawlRecord, OutcomeSummary};

use super::{EvalError, LabelSet};

pub const DEFAULT_BLOCK_SIZE: usize = 1000;

pub const SERIES_HEADER: [&str; 5] = [
    "block_index",
    "pages",
    "on_topic",
    "harvest_ratio",
    "cumulative_on_topic",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Block {
    pub index: usize,
    pub pages: usize,
    pub on_topic: usize,
    pub harvest_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricsSeries {
    pub block_size: usize,
    pub blocks: Vec<Block>,
    /// Running on-topic total at the end of each block.
    pub cumulative: Vec<usize>,
}

impl MetricsSeries {
    pub fn total_pages(&self) -> usize {
        self.blocks.iter().map(|b| b.pages).sum()
    }

    pub fn total_on_topic(&self) -> usize {
        self.cumulative.last().copied().unwrap_or(0)
    }

    /// Overall harvest ratio.
    pub fn harvest_ratio(&self) -> f64 {
        match self.total_pages() {
            0 => 0.0,
            n => self.total_on_topic() as f64 / n as f64,
        }
    }
}

/// A ratio that may have a zero denominator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Metric {
    Defined(f64),
    Undefined,
}

impl Metric {
    fn ratio(num: usize, den: usize) -> Metric {
        if den == 0 {
            Metric::Undefined
        } else {
            Metric::Defined(num as f64 / den as f64)
        }
    }

    pub fn value(self) -> Option<f64> {
        match self {
            Metric::Defined(v) => Some(v),
            Metric::Undefined => None,
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Metric::Defined(v) => write!(f, "{v}"),
            Metric::Undefined => f.write_str("undefined"),
        }
    }
}

/// Per-block harvest ratios in log order. A page counts as on-topic by its
/// label when labels are given (unlabeled pages count as off-topic), else
/// by the crawler's own decision.
pub fn harvest_series(
    log: &[CrawlRecord],
    labels: Option<&LabelSet>,
    block_size: usize,
) -> Result<MetricsSeries, EvalError> {
    if block_size < 1 {
        return Err(EvalError::BlockSize);
    }
    if log.is_empty() {
        return Err(EvalError::EmptyLog);
    }
    let hit = |r: &CrawlRecord| match labels {
        Some(l) => l.get(&r.url).unwrap_or(false),
        None => r.page_decision.on_topic,
    };
    let mut blocks = Vec::new();
    let mut cumulative = Vec::new();
    let mut running = 0;
    for (index, chunk) in log.chunks(block_size).enumerate() {
        let on_topic = chunk.iter().filter(|r| hit(r)).count();
        running += on_topic;
        blocks.push(Block {
            index,
            pages: chunk.len(),
            on_topic,
            harvest_ratio: on_topic as f64 / chunk.len() as f64,
        });
        cumulative.push(running);
    }
    Ok(MetricsSeries {
        block_size,
        blocks,
        cumulative,
    })
}

/// Recall and precision of the crawler's page decisions over successfully
/// fetched, labeled pages. A URL stored more than once is judged by its
/// latest version.
pub fn recall_precision(log: &[CrawlRecord], labels: &LabelSet) -> Result<(Metric, Metric), EvalError> {
    if labels.is_empty() {
        return Err(EvalError::EmptyLabels);
    }
    let mut latest: BTreeMap<&str, &CrawlRecord> = BTreeMap::new();
    for r in log {
        if matches!(r.outcome, OutcomeSummary::Ok { .. }) {
            latest.insert(&r.url, r);
        }
    }
    let (mut tp, mut fp, mut fn_, mut overlap) = (0, 0, 0, 0);
    for (url, r) in latest {
        let Some(truth) = labels.get(url) else { continue };
        overlap += 1;
        match (truth, r.page_decision.on_topic) {
            (true, true) => tp += 1,
            (false, true) => fp += 1,
            (true, false) => fn_ += 1,
            (false, false) => {}
        }
    }
    if overlap == 0 {
        return Err(EvalError::NoLabeledOverlap);
    }
    Ok((Metric::ratio(tp, tp + fn_), Metric::ratio(tp, tp + fp)))
}

pub fn series_csv(series: &MetricsSeries) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SERIES_HEADER).expect("in-memory write");
    for (b, cum) in series.blocks.iter().zip(&series.cumulative) {
        w.write_record([
            b.index.to_string(),
            b.pages.to_string(),
            b.on_topic.to_string(),
            b.harvest_ratio.to_string(),
            cum.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii")
}

pub fn write_series_csv(series: &MetricsSeries, path: impl AsRef<Path>) -> Result<(), EvalError> {
    let path = path.as_ref();
    std::fs::write(path, series_csv(series)).map_err(|e| EvalError::io(path, e))
}

/// Parses a single-strategy metrics CSV. The block size is taken from the
/// first block.
pub fn read_series_csv(text: &str) -> Result<MetricsSeries, EvalError> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().map_err(|e| EvalError::Csv(e.to_string()))?;
    if header.iter().ne(SERIES_HEADER) {
        return Err(EvalError::Csv(format!("unexpected header {header:?}")));
    }
    let mut blocks = Vec::new();
    let mut cumulative = Vec::new();
    for (row, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| EvalError::Csv(e.to_string()))?;
        let field = |i: usize| {
            rec.get(i)
                .ok_or_else(|| EvalError::Csv(format!("row {}: missing field {i}", row + 1)))
        };
        let int = |i: usize| -> Result<usize, EvalError> {
            field(i)?
                .parse()
                .map_err(|e| EvalError::Csv(format!("row {}: {e}", row + 1)))
        };
        blocks.push(Block {
            index: int(0)?,
            pages: int(1)?,
            on_topic: int(2)?,
            harvest_ratio: field(3)?
                .parse()
                .map_err(|e| EvalError::Csv(format!("row {}: {e}", row + 1)))?,
        });
        cumulative.push(int(4)?);
    }
    Ok(MetricsSeries {
        block_size: blocks.first().map_or(DEFAULT_BLOCK_SIZE, |b| b.pages),
        blocks,
        cumulative,
    })
}
