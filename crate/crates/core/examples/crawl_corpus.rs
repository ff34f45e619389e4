//! Crawls a generated corpus step by step and prints what each step did.
//!
//!     cargo run --example crawl_corpus -- [steps]

use focuscrawl::crawl::{CrawlConfig, Crawler};
use focuscrawl::eval::{gen_corpus, CorpusSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let steps: usize = std::env::args().nth(1).map_or(Ok(25), |s| s.parse())?;
    let dir = tempfile::tempdir()?;
    let spec = CorpusSpec {
        total_pages: 400,
        cluster_count: 2,
        cluster_size: 30,
        ..CorpusSpec::default()
    };
    let corpus = gen_corpus(&spec, dir.path())?;
    let mut config = CrawlConfig::load(&corpus.config)?;
    config.seeds.truncate(1);
    config.page_budget = steps;

    let mut crawler = Crawler::from_config(&config)?;
    while crawler.steps() < config.page_budget {
        let Some(r) = crawler.crawl_step()? else { break };
        println!(
            "{:>3} {:.3} {:<9} +{:<2} {}",
            crawler.steps(),
            r.priority,
            if r.on_topic { "on-topic" } else { "off-topic" },
            r.enqueued,
            r.url
        );
    }
    println!("frontier holds {} URLs", crawler.frontier().len());
    Ok(())
}
