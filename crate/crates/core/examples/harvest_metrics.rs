//! Computes block harvest ratios and recall/precision for a crawl of a
//! generated corpus, and prints the metrics CSV.

use focuscrawl::crawl::{CrawlConfig, Crawler};
use focuscrawl::eval::{gen_corpus, harvest_series, recall_precision, series_csv, CorpusSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let corpus = gen_corpus(&CorpusSpec { total_pages: 1000, cluster_size: 10, ..CorpusSpec::default() }, dir.path())?;
    let mut config = CrawlConfig::load(&corpus.config)?;
    config.output = None;
    config.page_budget = 400;
    let mut crawler = Crawler::from_config(&config)?;
    crawler.run()?;
    let log = crawler.repository().records();

    let series = harvest_series(log, Some(&corpus.labels), 100)?;
    let (recall, precision) = recall_precision(log, &corpus.labels)?;
    print!("{}", series_csv(&series));
    println!("harvest {:.3}, recall {recall}, precision {precision}", series.harvest_ratio());
    Ok(())
}
