//! Crawl configuration: a flat `key = value` file.
//!
//! Relative paths are resolved against the directory holding the config.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::pagemodel::{normalize_url, DEFAULT_CONTEXT_WINDOW};
use crate::tgraph::{OsmParams, WatchdogConfig};
use crate::topic::DetectorParams;

use super::CrawlError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Treasure,
    Bfs,
}

impl FromStr for Strategy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "treasure" => Ok(Strategy::Treasure),
            "bfs" => Ok(Strategy::Bfs),
            other => Err(format!("unknown strategy {other:?} (expected treasure or bfs)")),
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Strategy::Treasure => "treasure",
            Strategy::Bfs => "bfs",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FetchMode {
    Live,
    Corpus,
}

impl FromStr for FetchMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "live" => Ok(FetchMode::Live),
            "corpus" => Ok(FetchMode::Corpus),
            other => Err(format!("unknown fetch_mode {other:?} (expected live or corpus)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrawlConfig {
    pub tgraph_depth: usize,
    pub osm_threshold: f64,
    pub anchor_impact: f64,
    pub max_dnumber_length: usize,
    pub unrelated_priority: f64,
    pub aging_factor: f64,
    pub aging_interval: u64,
    pub page_budget: usize,
    pub strategy: Strategy,
    pub fetch_mode: FetchMode,
    pub context_window: usize,
    pub watchdog: WatchdogConfig,
    /// Steps between repository audits.
    pub checker_interval: usize,
    pub seeds: Vec<String>,
    pub taxonomy: Option<PathBuf>,
    /// One code per line; the English-language profile when absent.
    pub profile: Option<PathBuf>,
    pub tgraph: Option<PathBuf>,
    /// Target URLs used to build a T-Graph from the corpus when no
    /// `tgraph` file is given.
    pub targets: Option<PathBuf>,
    pub corpus: Option<PathBuf>,
    pub labels: Option<PathBuf>,
    pub output: Option<PathBuf>,
    /// Ablation switch: when false, links found on off-topic pages are
    /// dropped instead of queued at `unrelated_priority`.
    pub follow_off_topic_links: bool,
}

impl Default for CrawlConfig {
    fn default() -> Self {
        CrawlConfig {
            tgraph_depth: 3,
            osm_threshold: 0.05,
            anchor_impact: 1.40,
            max_dnumber_length: 3,
            unrelated_priority: 0.01,
            aging_factor: 0.05,
            aging_interval: 100,
            page_budget: 1000,
            strategy: Strategy::Treasure,
            fetch_mode: FetchMode::Corpus,
            context_window: DEFAULT_CONTEXT_WINDOW,
            watchdog: WatchdogConfig::default(),
            checker_interval: 100,
            seeds: Vec::new(),
            taxonomy: None,
            profile: None,
            tgraph: None,
            targets: None,
            corpus: None,
            labels: None,
            output: None,
            follow_off_topic_links: true,
        }
    }
}

impl CrawlConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, CrawlError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| CrawlError::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new(""));
        Self::parse(&text, base)
    }

    /// Parses config text. A `seeds` key names a seeds file, which is read
    /// immediately.
    pub fn parse(text: &str, base: &Path) -> Result<Self, CrawlError> {
        let mut cfg = CrawlConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |msg: String| CrawlError::Config(format!("config line {}: {msg}", idx + 1));
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("expected key = value, got {line:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            let path = || Some(base.join(value));
            match key {
                "tgraph_depth" => cfg.tgraph_depth = num(key, value).map_err(bad)?,
                "osm_threshold" => cfg.osm_threshold = num(key, value).map_err(bad)?,
                "anchor_impact" => cfg.anchor_impact = num(key, value).map_err(bad)?,
                "max_dnumber_length" => cfg.max_dnumber_length = num(key, value).map_err(bad)?,
                "unrelated_priority" => cfg.unrelated_priority = num(key, value).map_err(bad)?,
                "aging_factor" => cfg.aging_factor = num(key, value).map_err(bad)?,
                "aging_interval" => cfg.aging_interval = num(key, value).map_err(bad)?,
                "page_budget" => cfg.page_budget = num(key, value).map_err(bad)?,
                "strategy" => cfg.strategy = value.parse().map_err(bad)?,
                "fetch_mode" => cfg.fetch_mode = value.parse().map_err(bad)?,
                "context_window" => cfg.context_window = num(key, value).map_err(bad)?,
                "watchdog_enabled" => cfg.watchdog.enabled = num(key, value).map_err(bad)?,
                "watchdog_interval" => cfg.watchdog.interval = num(key, value).map_err(bad)?,
                "promote_threshold" => cfg.watchdog.promote_threshold = num(key, value).map_err(bad)?,
                "watchdog_max_nodes" => cfg.watchdog.max_nodes = num(key, value).map_err(bad)?,
                "checker_interval" => cfg.checker_interval = num(key, value).map_err(bad)?,
                "seeds" => {
                    let seeds = base.join(value);
                    cfg.seeds = read_seeds(&seeds)?;
                }
                "taxonomy" => cfg.taxonomy = path(),
                "profile" => cfg.profile = path(),
                "tgraph" => cfg.tgraph = path(),
                "targets" => cfg.targets = path(),
                "corpus" => cfg.corpus = path(),
                "labels" => cfg.labels = path(),
                "output" => cfg.output = path(),
                other => return Err(bad(format!("unknown key {other:?}"))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CrawlError> {
        let positive = [
            ("tgraph_depth", self.tgraph_depth as f64),
            ("osm_threshold", self.osm_threshold),
            ("anchor_impact", self.anchor_impact),
            ("max_dnumber_length", self.max_dnumber_length as f64),
            ("unrelated_priority", self.unrelated_priority),
            ("aging_factor", self.aging_factor),
            ("aging_interval", self.aging_interval as f64),
            ("page_budget", self.page_budget as f64),
            ("context_window", self.context_window as f64),
            ("watchdog_interval", self.watchdog.interval as f64),
            ("checker_interval", self.checker_interval as f64),
        ];
        for (name, v) in positive {
            if v.is_nan() || v <= 0.0 {
                return Err(CrawlError::Config(format!("{name} must be positive")));
            }
        }
        if self.anchor_impact < 1.0 {
            return Err(CrawlError::Config("anchor_impact must be at least 1".into()));
        }
        if self.unrelated_priority > 1.0 {
            return Err(CrawlError::Config("unrelated_priority must be at most 1".into()));
        }
        Ok(())
    }

    pub fn detector_params(&self) -> DetectorParams {
        DetectorParams {
            anchor_impact: self.anchor_impact,
            max_dnumber_length: self.max_dnumber_length,
        }
    }

    pub fn osm_params(&self) -> OsmParams {
        OsmParams {
            osm_threshold: self.osm_threshold,
            unrelated_priority: self.unrelated_priority,
        }
    }
}

fn num<T: FromStr>(key: &str, value: &str) -> Result<T, String>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e| format!("{key}: bad value {value:?}: {e}"))
}

/// One URL per line; `#` starts a comment. URLs are normalized.
pub fn read_seeds(path: &Path) -> Result<Vec<String>, CrawlError> {
    let text = std::fs::read_to_string(path).map_err(|e| CrawlError::io(path, e))?;
    parse_seeds(&text)
}

pub fn parse_seeds(text: &str) -> Result<Vec<String>, CrawlError> {
    let mut seeds = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let url = normalize_url(line, line)
            .map_err(|e| CrawlError::Config(format!("seeds line {}: {e}", idx + 1)))?;
        seeds.push(url);
    }
    Ok(seeds)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_reference_values() {
        let c = CrawlConfig::default();
        assert_eq!(c.tgraph_depth, 3);
        assert_eq!(c.osm_threshold, 0.05);
        assert_eq!(c.anchor_impact, 1.40);
        assert_eq!(c.max_dnumber_length, 3);
        assert_eq!(c.unrelated_priority, 0.01);
        assert_eq!(c.aging_factor, 0.05);
        assert_eq!(c.aging_interval, 100);
    }

    #[test]
    fn parses_keys_and_paths() {
        let c = CrawlConfig::parse(
            "# run\nstrategy = bfs\npage_budget = 3 # tiny\ncorpus = c/manifest.jsonl\nwatchdog_enabled = true\n",
            Path::new("/base"),
        )
        .unwrap();
        assert_eq!(c.strategy, Strategy::Bfs);
        assert_eq!(c.page_budget, 3);
        assert_eq!(c.corpus, Some(PathBuf::from("/base/c/manifest.jsonl")));
        assert!(c.watchdog.enabled);
    }

    #[test]
    fn rejects_unknown_and_invalid() {
        let p = Path::new("");
        assert!(CrawlConfig::parse("colour = red", p).unwrap_err().to_string().contains("unknown key"));
        assert!(CrawlConfig::parse("page_budget = 0", p).is_err());
        assert!(CrawlConfig::parse("osm_threshold = -1", p).is_err());
        assert!(CrawlConfig::parse("strategy = dfs", p).is_err());
        assert!(CrawlConfig::parse("just words", p).is_err());
    }

    #[test]
    fn seeds_skip_comments() {
        let s = parse_seeds("# on-topic\nhttp://A.org/x#frag\n\nhttp://b.org/ # generic\n").unwrap();
        assert_eq!(s, vec!["http://a.org/x", "http://b.org/"]);
    }
}
