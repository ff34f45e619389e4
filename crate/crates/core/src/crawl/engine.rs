//! The crawl loop: dequeue, fetch, queue the response, classify and score,
//! enqueue links, store the record.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::path::PathBuf;
use std::time::Duration;

use crate::pagemodel::{extract_context, parse_document, PageDocument};
use crate::taxonomy::{Taxonomy, TopicProfile};
use crate::tgraph::{
    build_tgraph, load_tgraph, score_link, Components, CorpusParentIndex, Experience, TGraph,
    TermVector, Watchdog, DEFAULT_MAX_PARENTS,
};
use crate::topic::{classify_link, classify_page, TopicDecision};

use super::config::{read_seeds, CrawlConfig, FetchMode, Strategy};
use super::corpus::Corpus;
use super::fetch::{CorpusFetcher, FetchOutcome, FetchResponse, Fetcher, LiveFetcher, OutcomeSummary};
use super::frontier::Frontier;
use super::repository::{CrawlRecord, Repository};
use super::CrawlError;

pub const LIVE_TIMEOUT: Duration = Duration::from_secs(10);
pub const LIVE_HOST_DELAY: Duration = Duration::from_secs(1);

#[derive(Debug, Clone, PartialEq)]
pub struct StepReport {
    pub url: String,
    pub priority: f64,
    pub version: u32,
    pub outcome: OutcomeSummary,
    pub on_topic: bool,
    /// Links newly accepted by the frontier.
    pub enqueued: usize,
}

impl StepReport {
    pub fn is_error(&self) -> bool {
        !matches!(self.outcome, OutcomeSummary::Ok { .. })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrawlSummary {
    /// Fetch attempts, successful or not.
    pub pages_crawled: usize,
    pub on_topic: usize,
    pub log_path: Option<PathBuf>,
    pub frontier_exhausted: bool,
}

pub struct Crawler {
    config: CrawlConfig,
    taxonomy: Taxonomy,
    profile: TopicProfile,
    tgraph: Option<TGraph>,
    fetcher: Box<dyn Fetcher>,
    frontier: Frontier,
    repo: Repository,
    responses: VecDeque<(FetchResponse, f64)>,
    watchdog: Watchdog,
    /// Anchor and context text of the link each queued URL was found by.
    discovered_by: HashMap<String, (String, String)>,
    steps: usize,
    on_topic: usize,
}

impl Crawler {
    /// Seeds are enqueued at priority 1.0, in order.
    pub fn new(
        config: CrawlConfig,
        taxonomy: Taxonomy,
        profile: TopicProfile,
        tgraph: Option<TGraph>,
        fetcher: Box<dyn Fetcher>,
        repo: Repository,
    ) -> Result<Self, CrawlError> {
        config.validate()?;
        if config.strategy == Strategy::Treasure && tgraph.is_none() {
            return Err(CrawlError::Config("treasure strategy needs a T-Graph".into()));
        }
        if config.seeds.is_empty() {
            return Err(CrawlError::Config("no seed URLs".into()));
        }
        let mut frontier = Frontier::new(config.aging_factor, config.aging_interval);
        for seed in &config.seeds {
            frontier.enqueue(seed, 1.0)?;
        }
        Ok(Crawler {
            watchdog: Watchdog::new(config.watchdog),
            config,
            taxonomy,
            profile,
            tgraph,
            fetcher,
            frontier,
            repo,
            responses: VecDeque::new(),
            discovered_by: HashMap::new(),
            steps: 0,
            on_topic: 0,
        })
    }

    /// Loads everything named in the config. Fails before any fetch when a
    /// path is missing or unreadable.
    pub fn from_config(config: &CrawlConfig) -> Result<Self, CrawlError> {
        let need = |p: &Option<PathBuf>, key: &str| {
            p.clone()
                .ok_or_else(|| CrawlError::Config(format!("config is missing `{key}`")))
        };
        let taxonomy = Taxonomy::load(need(&config.taxonomy, "taxonomy")?)?;
        let profile = match &config.profile {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| CrawlError::io(p, e))?;
                TopicProfile::parse(&text, config.max_dnumber_length)?
            }
            None => TopicProfile::english_language(config.max_dnumber_length),
        };
        let corpus = match config.fetch_mode {
            FetchMode::Corpus => Some(Corpus::load(need(&config.corpus, "corpus")?)?),
            FetchMode::Live => None,
        };
        let tgraph = match (&config.tgraph, &config.targets) {
            (Some(path), _) => Some(load_tgraph(path)?),
            (None, Some(targets)) => {
                let corpus = corpus.as_ref().ok_or_else(|| {
                    CrawlError::Config("building a T-Graph from `targets` needs a corpus".into())
                })?;
                let targets = read_seeds(targets)?;
                let index = CorpusParentIndex::build(corpus);
                Some(build_tgraph(&targets, &index, config.tgraph_depth, DEFAULT_MAX_PARENTS)?)
            }
            (None, None) if config.strategy == Strategy::Treasure => {
                return Err(CrawlError::Config(
                    "treasure strategy needs `tgraph` or `targets`".into(),
                ))
            }
            (None, None) => None,
        };
        let fetcher: Box<dyn Fetcher> = match corpus {
            Some(c) => Box::new(CorpusFetcher::new(c)),
            None => Box::new(
                LiveFetcher::new(LIVE_TIMEOUT, LIVE_HOST_DELAY)
                    .map_err(|e| CrawlError::Config(format!("HTTP client: {e}")))?,
            ),
        };
        let repo = match &config.output {
            Some(dir) => Repository::on_disk(dir)?,
            None => Repository::in_memory(),
        };
        Crawler::new(config.clone(), taxonomy, profile, tgraph, fetcher, repo)
    }

    pub fn frontier(&self) -> &Frontier {
        &self.frontier
    }

    pub fn repository(&self) -> &Repository {
        &self.repo
    }

    pub fn tgraph(&self) -> Option<&TGraph> {
        self.tgraph.as_ref()
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// One fetch-and-process cycle. `None` when the frontier is empty.
    pub fn crawl_step(&mut self) -> Result<Option<StepReport>, CrawlError> {
        let Some(item) = self.frontier.dequeue() else {
            return Ok(None);
        };
        let response = self.fetcher.fetch(&item.url);
        self.responses.push_back((response, item.priority));
        let (response, priority) = self.responses.pop_front().expect("just queued");
        self.steps += 1;

        let summary = response.outcome.summary();
        let (decision, link_scores, enqueued) = match response.outcome {
            FetchOutcome::Ok { ref html, .. } => {
                let doc = parse_document(html, &response.url);
                let decision = classify_page(
                    &doc,
                    &self.taxonomy,
                    &self.profile,
                    &self.config.detector_params(),
                );
                let scores = self.score_links(&doc, decision.on_topic);
                let mut enqueued = 0;
                for (target, p) in &scores {
                    if self.frontier.enqueue(target, *p)? {
                        enqueued += 1;
                    }
                }
                self.feed_watchdog(&response.url, &doc, decision.on_topic);
                (decision, scores, enqueued)
            }
            _ => (TopicDecision::off_topic(), Vec::new(), 0),
        };
        if decision.on_topic {
            self.on_topic += 1;
        }
        let html = match response.outcome {
            FetchOutcome::Ok { html, .. } => Some(html),
            _ => None,
        };
        let version = self.repo.store_page(CrawlRecord {
            url: response.url.clone(),
            version: 0,
            html_path: None,
            html,
            page_decision: decision.clone(),
            link_scores,
            outcome: summary.clone(),
            stored_at: response.fetched_at,
        })?;
        if self.steps.is_multiple_of(self.config.checker_interval) {
            self.repo.audit()?;
        }
        Ok(Some(StepReport {
            url: response.url,
            priority,
            version,
            outcome: summary,
            on_topic: decision.on_topic,
            enqueued,
        }))
    }

    /// Priorities for every not-yet-seen link target on a page, in first
    /// occurrence order. A target linked twice keeps its best score.
    fn score_links(&mut self, doc: &PageDocument, page_on_topic: bool) -> Vec<(String, f64)> {
        let mut order: Vec<String> = Vec::new();
        let mut best: BTreeMap<String, f64> = BTreeMap::new();
        let mut put = |order: &mut Vec<String>, target: &str, p: f64| {
            match best.get_mut(target) {
                Some(old) => *old = old.max(p),
                None => {
                    order.push(target.to_string());
                    best.insert(target.to_string(), p);
                }
            }
        };
        let unseen = doc
            .links
            .iter()
            .filter(|l| l.target != doc.url && !self.frontier.has_seen(&l.target));

        match self.config.strategy {
            Strategy::Bfs => {
                for link in unseen {
                    put(&mut order, &link.target, 1.0);
                }
            }
            Strategy::Treasure if !page_on_topic => {
                if self.config.follow_off_topic_links {
                    for link in unseen {
                        put(&mut order, &link.target, self.config.unrelated_priority);
                    }
                }
            }
            Strategy::Treasure => {
                let graph = self.tgraph.as_ref().expect("checked at construction");
                let params = self.config.detector_params();
                let osm = self.config.osm_params();
                let title = TermVector::from_text(&doc.title);
                let body = TermVector::from_text(&doc.body_text());
                for link in unseen {
                    let Ok(ctx) = extract_context(doc, link, self.config.context_window) else {
                        continue;
                    };
                    let anchor = ctx.anchor_text();
                    let surrounding = ctx.text();
                    let p = if classify_link(&ctx, &self.taxonomy, &self.profile, &params).on_topic {
                        let comps = Components {
                            anchor: TermVector::from_text(&anchor),
                            surrounding: TermVector::from_text(&surrounding),
                            title: title.clone(),
                            body: body.clone(),
                        };
                        score_link(&comps, graph, &osm)
                    } else {
                        osm.unrelated_priority
                    };
                    if self.config.watchdog.enabled {
                        self.discovered_by
                            .entry(link.target.clone())
                            .or_insert((anchor, surrounding));
                    }
                    put(&mut order, &link.target, p);
                }
            }
        }
        order
            .into_iter()
            .map(|t| {
                let p = best[&t];
                (t, p)
            })
            .collect()
    }

    fn feed_watchdog(&mut self, url: &str, doc: &PageDocument, on_topic: bool) {
        if !self.config.watchdog.enabled || self.config.strategy != Strategy::Treasure {
            return;
        }
        let Some(graph) = &self.tgraph else { return };
        let (anchor, surrounding) = self.discovered_by.remove(url).unwrap_or_default();
        let experience = Experience {
            url: url.to_string(),
            on_topic,
            anchor_text: anchor,
            surrounding_text: surrounding,
            title_text: doc.title.clone(),
            body_text: doc.body_text(),
        };
        if let Some(next) = self.watchdog.observe(graph, Some(experience)) {
            log::info!("watchdog grew the T-Graph to {} nodes", next.nodes().len());
            self.tgraph = Some(next);
        }
    }

    /// Steps until the page budget is spent or the frontier runs dry, then
    /// flushes the log.
    pub fn run(&mut self) -> Result<CrawlSummary, CrawlError> {
        let result = self.run_inner();
        let flushed = self.repo.flush();
        let exhausted = result?;
        flushed?;
        self.repo.audit()?;
        Ok(CrawlSummary {
            pages_crawled: self.steps,
            on_topic: self.on_topic,
            log_path: self.repo.log_path(),
            frontier_exhausted: exhausted,
        })
    }

    fn run_inner(&mut self) -> Result<bool, CrawlError> {
        while self.steps < self.config.page_budget {
            match self.crawl_step()? {
                None => return Ok(true),
                Some(r) => log::debug!("{} {:.3} {:?}", r.url, r.priority, r.outcome),
            }
        }
        Ok(self.frontier.is_empty())
    }

    pub fn into_repository(self) -> Repository {
        self.repo
    }
}

/// Loads everything from the config and crawls to completion.
pub fn run_crawl(config: &CrawlConfig) -> Result<CrawlSummary, CrawlError> {
    Crawler::from_config(config)?.run()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tgraph::TGraphNode;

    const TAXONOMY: &str = "\
420\tEnglish\tenglish,grammar,syntax,vocabulary
796\tSports\tfootball,athletics,goal
";

    /// Serves pages from a map; everything else is a 404.
    struct MapFetcher(HashMap<String, String>);

    impl Fetcher for MapFetcher {
        fn fetch(&mut self, url: &str) -> FetchResponse {
            let outcome = match self.0.get(url) {
                Some(html) => FetchOutcome::Ok {
                    status: 200,
                    html: html.clone().into_bytes(),
                },
                None => FetchOutcome::HttpError {
                    status: 404,
                    message: "not in corpus".into(),
                },
            };
            FetchResponse {
                url: url.into(),
                outcome,
                fetched_at: 0,
            }
        }
    }

    fn graph() -> TGraph {
        let node = |id, level, url: &str| {
            TGraphNode::new(
                id,
                level,
                url,
                "english grammar",
                "english grammar lessons",
                "grammar",
                "english grammar syntax",
            )
        };
        TGraph::from_parts(
            2,
            vec![node(0, 0, "http://t.org/0"), node(1, 1, "http://t.org/1")],
            vec![(0, 1)],
        )
        .unwrap()
    }

    fn crawler(pages: &[(&str, &str)], config: CrawlConfig) -> Crawler {
        let map = pages.iter().map(|(u, h)| (u.to_string(), h.to_string())).collect();
        Crawler::new(
            config,
            Taxonomy::parse(TAXONOMY).unwrap(),
            TopicProfile::english_language(3),
            Some(graph()),
            Box::new(MapFetcher(map)),
            Repository::in_memory(),
        )
        .unwrap()
    }

    fn config(seeds: &[&str]) -> CrawlConfig {
        CrawlConfig {
            seeds: seeds.iter().map(|s| s.to_string()).collect(),
            ..CrawlConfig::default()
        }
    }

    const ON_TOPIC: &str = "<title>english grammar</title><body>\
        <p>Study english grammar and syntax with <a href=\"/g\">english grammar lessons</a>.</p>\
        <ul><li><a href=\"/f\">football</a> results for football fans</li></ul></body>";

    #[test]
    fn on_topic_page_scores_links() {
        let mut c = crawler(&[("http://x.org/", ON_TOPIC)], config(&["http://x.org/"]));
        let r = c.crawl_step().unwrap().unwrap();
        assert!(r.on_topic);
        assert_eq!(r.enqueued, 2);
        let rec = &c.repository().records()[0];
        assert_eq!(rec.link_scores[0], ("http://x.org/g".into(), 1.0));
        assert_eq!(rec.link_scores[1], ("http://x.org/f".into(), 0.01));
    }

    #[test]
    fn off_topic_page_gets_unrelated_priority() {
        let page = "<p>football athletics goal <a href=\"/a\">a</a> <a href=\"/b\">b</a> <a href=\"/c\">c</a></p>";
        let mut c = crawler(&[("http://x.org/", page)], config(&["http://x.org/"]));
        let r = c.crawl_step().unwrap().unwrap();
        assert!(!r.on_topic);
        let rec = &c.repository().records()[0];
        assert!(rec.link_scores.iter().all(|(_, p)| *p == 0.01));
        assert_eq!(rec.link_scores.len(), 3);

        let mut cfg = config(&["http://x.org/"]);
        cfg.follow_off_topic_links = false;
        let mut c = crawler(&[("http://x.org/", page)], cfg);
        assert_eq!(c.crawl_step().unwrap().unwrap().enqueued, 0);
        assert!(c.frontier().is_empty());
    }

    #[test]
    fn fetch_error_is_recorded_without_links() {
        let mut c = crawler(&[], config(&["http://x.org/missing", "http://x.org/other"]));
        let r = c.crawl_step().unwrap().unwrap();
        assert!(r.is_error());
        assert_eq!(r.enqueued, 0);
        assert_eq!(c.frontier().len(), 1);
        assert_eq!(c.repository().records()[0].page_decision, TopicDecision::off_topic());
    }

    #[test]
    fn bfs_gives_every_link_full_priority() {
        let mut cfg = config(&["http://x.org/"]);
        cfg.strategy = Strategy::Bfs;
        let mut c = crawler(&[("http://x.org/", ON_TOPIC)], cfg);
        c.crawl_step().unwrap();
        assert!(c.repository().records()[0].link_scores.iter().all(|(_, p)| *p == 1.0));
    }

    #[test]
    fn budget_and_exhaustion() {
        let page = |links: &[&str]| {
            links
                .iter()
                .map(|l| format!("<p><a href=\"{l}\">x</a></p>"))
                .collect::<String>()
        };
        let all = ["/1", "/2", "/3", "/4", "/5"];
        let pages: Vec<(String, String)> = all
            .iter()
            .map(|p| (format!("http://x.org{p}"), page(&all)))
            .collect();
        let refs: Vec<(&str, &str)> = pages.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();

        let mut cfg = config(&["http://x.org/1"]);
        cfg.page_budget = 10;
        let s = crawler(&refs, cfg).run().unwrap();
        assert_eq!(s.pages_crawled, 5);
        assert!(s.frontier_exhausted);

        let mut cfg = config(&["http://x.org/1"]);
        cfg.page_budget = 3;
        let s = crawler(&refs, cfg).run().unwrap();
        assert_eq!(s.pages_crawled, 3);
        assert!(!s.frontier_exhausted);
    }

    #[test]
    fn treasure_without_graph_is_a_startup_error() {
        let err = Crawler::new(
            config(&["http://x.org/"]),
            Taxonomy::parse(TAXONOMY).unwrap(),
            TopicProfile::english_language(3),
            None,
            Box::new(MapFetcher(HashMap::new())),
            Repository::in_memory(),
        );
        assert!(err.is_err());
    }

    #[test]
    fn missing_paths_fail_before_fetching() {
        let cfg = CrawlConfig {
            taxonomy: Some("/nonexistent/taxonomy.tsv".into()),
            ..config(&["http://x.org/"])
        };
        assert!(Crawler::from_config(&cfg).is_err());
        assert!(Crawler::from_config(&config(&["http://x.org/"])).is_err());
    }
}
