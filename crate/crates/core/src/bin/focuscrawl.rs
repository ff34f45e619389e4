use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use focuscrawl::crawl::{read_log, read_seeds, run_crawl, CrawlConfig, Strategy};
use focuscrawl::eval::{
    compare_strategies, gen_corpus, harvest_series, recall_precision, write_comparison_csv,
    write_series_csv, CorpusSpec, LabelSet, DEFAULT_BLOCK_SIZE,
};
use focuscrawl::tgraph::{build_tgraph, save_tgraph, StaticParentMap, DEFAULT_MAX_PARENTS};
use focuscrawl::Error;

#[derive(Parser)]
#[command(version, about = "Focused crawler with Dewey-code topic detection and T-Graph scoring")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Crawl from a config file.
    Crawl {
        #[arg(long)]
        config: PathBuf,
    },
    /// Build a T-Graph from target URLs and a parent-map TSV.
    BuildTgraph {
        #[arg(long)]
        targets: PathBuf,
        #[arg(long)]
        parents: PathBuf,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate a synthetic clustered corpus.
    GenCorpus {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Per-block harvest ratios of a crawl log, as CSV.
    Eval {
        #[arg(long)]
        log: PathBuf,
        #[arg(long)]
        labels: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_BLOCK_SIZE)]
        block: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Crawl once per strategy and write the blocks side by side.
    Compare {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "treasure,bfs")]
        strategies: Vec<Strategy>,
        #[arg(long, default_value_t = DEFAULT_BLOCK_SIZE)]
        block: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Crawl { config } => {
            let config = CrawlConfig::load(&config)?;
            let s = run_crawl(&config)?;
            println!("pages crawled: {}", s.pages_crawled);
            println!("on-topic: {}", s.on_topic);
            if let Some(log) = s.log_path {
                println!("log: {}", log.display());
            }
        }
        Command::BuildTgraph {
            targets,
            parents,
            depth,
            out,
        } => {
            let targets = read_seeds(&targets)?;
            let map = StaticParentMap::load(&parents)?;
            let graph = build_tgraph(&targets, &map, depth, DEFAULT_MAX_PARENTS)?;
            save_tgraph(&graph, &out)?;
            println!("{} nodes, {} edges", graph.nodes().len(), graph.edges().len());
        }
        Command::GenCorpus { spec, out } => {
            let spec = CorpusSpec::load(&spec)?;
            let corpus = gen_corpus(&spec, &out)?;
            println!("{} pages written to {}", spec.total_pages, out.display());
            println!("config: {}", corpus.config.display());
        }
        Command::Eval {
            log,
            labels,
            block,
            out,
        } => {
            let log = read_log(&log).map_err(|e| Error::Eval(e.into()))?;
            let labels = labels.map(LabelSet::load).transpose()?;
            let series = harvest_series(&log, labels.as_ref(), block)?;
            write_series_csv(&series, &out)?;
            println!(
                "{} pages, {} on-topic, harvest ratio {:.4}",
                series.total_pages(),
                series.total_on_topic(),
                series.harvest_ratio()
            );
            if let Some(labels) = &labels {
                let (recall, precision) = recall_precision(&log, labels)?;
                println!("recall {recall}, precision {precision}");
            }
        }
        Command::Compare {
            config,
            strategies,
            block,
            out,
        } => {
            let config = CrawlConfig::load(&config)?;
            let cmp = compare_strategies(&config, &strategies, block)?;
            write_comparison_csv(&cmp, &out)?;
            for r in &cmp.runs {
                println!(
                    "{}: {} pages, {} on-topic, recall {}, precision {}",
                    r.strategy,
                    r.series.total_pages(),
                    r.series.total_on_topic(),
                    r.recall,
                    r.precision
                );
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
