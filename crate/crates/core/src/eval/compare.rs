use std::path::Path;

use crate::crawl::{CrawlConfig, CrawlRecord, CrawlSummary, Crawler, Strategy};

use super::{harvest_series, recall_precision, EvalError, LabelSet, Metric, MetricsSeries};

#[derive(Debug, Clone, PartialEq)]
pub struct StrategyRun {
    pub strategy: Strategy,
    pub summary: CrawlSummary,
    pub series: MetricsSeries,
    /// Measured against the config's labels; undefined without labels.
    pub recall: Metric,
    pub precision: Metric,
}

impl StrategyRun {
    /// Cumulative on-topic counts scaled by the measured recall.
    pub fn recall_scaled(&self) -> Vec<Metric> {
        self.series
            .cumulative
            .iter()
            .map(|&c| match self.recall {
                Metric::Defined(r) => Metric::Defined(c as f64 * r),
                Metric::Undefined => Metric::Undefined,
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub runs: Vec<StrategyRun>,
}

impl Comparison {
    pub fn run(&self, strategy: Strategy) -> Option<&StrategyRun> {
        self.runs.iter().find(|r| r.strategy == strategy)
    }

    /// One row per block; per strategy the block's pages and on-topic
    /// count, the cumulative count and its recall-scaled value. Cells past
    /// the end of a shorter run are empty.
    pub fn to_csv(&self) -> String {
        let mut header = vec!["block_index".to_string()];
        for r in &self.runs {
            for col in ["pages", "on_topic", "harvest_ratio", "cumulative_on_topic", "recall_scaled_cumulative"] {
                header.push(format!("{col}_{}", r.strategy));
            }
        }
        let rows = self.runs.iter().map(|r| r.series.blocks.len()).max().unwrap_or(0);
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&header).expect("in-memory write");
        for i in 0..rows {
            let mut row = vec![i.to_string()];
            for r in &self.runs {
                match r.series.blocks.get(i) {
                    Some(b) => row.extend([
                        b.pages.to_string(),
                        b.on_topic.to_string(),
                        b.harvest_ratio.to_string(),
                        r.series.cumulative[i].to_string(),
                        r.recall_scaled()[i].to_string(),
                    ]),
                    None => row.extend(std::iter::repeat_n(String::new(), 5)),
                }
            }
            w.write_record(&row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii")
    }
}

/// Crawls once per strategy with otherwise identical settings. With an
/// output directory in the config, each run writes under
/// `output/<strategy>/`. On-topic counts use the config's labels when set.
pub fn compare_strategies(
    config: &CrawlConfig,
    strategies: &[Strategy],
    block_size: usize,
) -> Result<Comparison, EvalError> {
    let labels = config.labels.as_ref().map(LabelSet::load).transpose()?;
    let mut runs = Vec::new();
    for &strategy in strategies {
        let wrap = |source| EvalError::Crawl {
            strategy: strategy.to_string(),
            source,
        };
        let mut cfg = config.clone();
        cfg.strategy = strategy;
        cfg.output = config.output.as_ref().map(|o| o.join(strategy.to_string()));
        let mut crawler = Crawler::from_config(&cfg).map_err(wrap)?;
        let summary = crawler.run().map_err(wrap)?;
        let log: &[CrawlRecord] = crawler.repository().records();
        let series = harvest_series(log, labels.as_ref(), block_size)?;
        let (recall, precision) = match &labels {
            Some(l) => recall_precision(log, l)?,
            None => (Metric::Undefined, Metric::Undefined),
        };
        runs.push(StrategyRun {
            strategy,
            summary,
            series,
            recall,
            precision,
        });
    }
    Ok(Comparison { runs })
}

pub fn write_comparison_csv(cmp: &Comparison, path: impl AsRef<Path>) -> Result<(), EvalError> {
    let path = path.as_ref();
    std::fs::write(path, cmp.to_csv()).map_err(|e| EvalError::io(path, e))
}
