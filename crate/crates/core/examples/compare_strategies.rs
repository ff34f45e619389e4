//! Generates a clustered corpus and crawls it with both strategies.
//!
//!     cargo run --release --example compare_strategies -- [total_pages] [budget] [seed]

use focuscrawl::crawl::{CrawlConfig, Strategy};
use focuscrawl::eval::{compare_strategies, gen_corpus, CorpusSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let total = args.first().copied().unwrap_or(2000) as usize;
    let budget = args.get(1).copied().unwrap_or(1000) as usize;
    let seed = args.get(2).copied().unwrap_or(7);

    let dir = tempfile::tempdir()?;
    let spec = CorpusSpec {
        total_pages: total,
        cluster_count: 10,
        cluster_size: total / 100,
        rng_seed: seed,
        ..CorpusSpec::default()
    };
    let corpus = gen_corpus(&spec, dir.path())?;
    let mut config = CrawlConfig::load(&corpus.config)?;
    config.page_budget = budget;
    config.output = None;

    let cmp = compare_strategies(&config, &[Strategy::Treasure, Strategy::Bfs], 100)?;
    for run in &cmp.runs {
        println!(
            "{:<8} pages {:>5}  on-topic {:>4}  harvest {:.3}  recall {}  precision {}",
            run.strategy,
            run.series.total_pages(),
            run.series.total_on_topic(),
            run.series.harvest_ratio(),
            run.recall,
            run.precision,
        );
    }
    print!("{}", cmp.to_csv());
    Ok(())
}
