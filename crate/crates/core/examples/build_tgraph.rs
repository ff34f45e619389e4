//! Builds a T-Graph from a generated corpus's parent map, saves it and
//! scores a couple of made-up links against it.

use focuscrawl::crawl::read_seeds;
use focuscrawl::eval::{gen_corpus, CorpusSpec};
use focuscrawl::tgraph::{
    build_tgraph, load_tgraph, save_tgraph, score_link, Components, OsmParams, StaticParentMap,
    DEFAULT_MAX_PARENTS,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let spec = CorpusSpec {
        total_pages: 300,
        cluster_count: 3,
        cluster_size: 20,
        ..CorpusSpec::default()
    };
    let corpus = gen_corpus(&spec, dir.path())?;
    let targets = read_seeds(&corpus.targets_path)?;
    let parents = StaticParentMap::load(&corpus.parents)?;
    let graph = build_tgraph(&targets, &parents, 3, DEFAULT_MAX_PARENTS)?;
    for level in 0..=graph.depth() {
        println!("level {level}: {} nodes", graph.level_count(level));
    }

    let path = dir.path().join("tgraph.json");
    save_tgraph(&graph, &path)?;
    let graph = load_tgraph(&path)?;

    let params = OsmParams::default();
    for (anchor, context) in [
        ("english syntax", "notes on grammar and verb tense"),
        ("football results", "stadium tennis and soccer"),
    ] {
        let link = Components::from_texts(anchor, context, "", "");
        println!("{anchor:<18} priority {}", score_link(&link, &graph, &params));
    }
    Ok(())
}
