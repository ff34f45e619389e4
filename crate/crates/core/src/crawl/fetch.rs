use std::collections::HashMap;
use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use url::Url;

use super::corpus::Corpus;
use super::robots::RobotsRules;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FetchOutcome {
    Ok { status: u16, html: Vec<u8> },
    HttpError { status: u16, message: String },
    NetError { message: String },
}

impl FetchOutcome {
    pub fn is_ok(&self) -> bool {
        matches!(self, FetchOutcome::Ok { .. })
    }

    /// The outcome without its payload, as written to the crawl log.
    pub fn summary(&self) -> OutcomeSummary {
        match self {
            FetchOutcome::Ok { status, .. } => OutcomeSummary::Ok { status: *status },
            FetchOutcome::HttpError { status, message } => OutcomeSummary::HttpError {
                status: *status,
                message: message.clone(),
            },
            FetchOutcome::NetError { message } => OutcomeSummary::NetError {
                message: message.clone(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OutcomeSummary {
    Ok { status: u16 },
    HttpError { status: u16, message: String },
    NetError { message: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FetchResponse {
    pub url: String,
    pub outcome: FetchOutcome,
    /// Seconds since the Unix epoch; always 0 for corpus fetches.
    pub fetched_at: u64,
}

/// Download abstraction. Failures are reported as outcomes, never as errors.
pub trait Fetcher {
    fn fetch(&mut self, url: &str) -> FetchResponse;
}

pub struct CorpusFetcher {
    corpus: Corpus,
}

impl CorpusFetcher {
    pub fn new(corpus: Corpus) -> Self {
        CorpusFetcher { corpus }
    }

    pub fn corpus(&self) -> &Corpus {
        &self.corpus
    }
}

impl Fetcher for CorpusFetcher {
    fn fetch(&mut self, url: &str) -> FetchResponse {
        let outcome = match self.corpus.entry(url) {
            None => FetchOutcome::HttpError {
                status: 404,
                message: "not in corpus".into(),
            },
            Some(entry) if entry.status != 200 => FetchOutcome::HttpError {
                status: entry.status,
                message: "corpus status".into(),
            },
            Some(entry) => match std::fs::read(self.corpus.file_path(entry)) {
                Ok(html) => FetchOutcome::Ok { status: 200, html },
                Err(e) => FetchOutcome::NetError {
                    message: e.to_string(),
                },
            },
        };
        FetchResponse {
            url: url.to_string(),
            outcome,
            fetched_at: 0,
        }
    }
}

pub const USER_AGENT: &str = concat!("focuscrawl/", env!("CARGO_PKG_VERSION"));

/// HTTP fetcher: GET with a timeout, one retry on network errors, robots.txt
/// per host and a fixed delay between requests to the same host.
pub struct LiveFetcher {
    client: reqwest::blocking::Client,
    robots: HashMap<String, RobotsRules>,
    last_request: HashMap<String, Instant>,
    host_delay: Duration,
}

impl LiveFetcher {
    pub fn new(timeout: Duration, host_delay: Duration) -> Result<Self, reqwest::Error> {
        let client = reqwest::blocking::Client::builder()
            .timeout(timeout)
            .user_agent(USER_AGENT)
            .build()?;
        Ok(LiveFetcher {
            client,
            robots: HashMap::new(),
            last_request: HashMap::new(),
            host_delay,
        })
    }

    fn wait_for_host(&mut self, host: &str) {
        if let Some(last) = self.last_request.get(host) {
            let elapsed = last.elapsed();
            if elapsed < self.host_delay {
                std::thread::sleep(self.host_delay - elapsed);
            }
        }
        self.last_request.insert(host.to_string(), Instant::now());
    }

    fn rules_for(&mut self, url: &Url) -> &RobotsRules {
        let origin = url.origin().ascii_serialization();
        if !self.robots.contains_key(&origin) {
            let host = url.host_str().unwrap_or("").to_string();
            self.wait_for_host(&host);
            let rules = self
                .client
                .get(format!("{origin}/robots.txt"))
                .send()
                .ok()
                .filter(|r| r.status().is_success())
                .and_then(|r| r.text().ok())
                .map(|text| RobotsRules::parse(&text, USER_AGENT))
                .unwrap_or_else(RobotsRules::allow_all);
            self.robots.insert(origin.clone(), rules);
        }
        &self.robots[&origin]
    }

    fn get(&mut self, url: &Url) -> Result<reqwest::blocking::Response, reqwest::Error> {
        let host = url.host_str().unwrap_or("").to_string();
        self.wait_for_host(&host);
        match self.client.get(url.as_str()).send() {
            Err(e) if e.is_connect() || e.is_timeout() || e.is_request() => {
                log::debug!("retrying {url}: {e}");
                self.wait_for_host(&host);
                self.client.get(url.as_str()).send()
            }
            other => other,
        }
    }
}

fn now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

impl Fetcher for LiveFetcher {
    fn fetch(&mut self, url: &str) -> FetchResponse {
        let outcome = match Url::parse(url) {
            Err(e) => FetchOutcome::NetError {
                message: e.to_string(),
            },
            Ok(parsed) => {
                let mut path = parsed.path().to_string();
                if let Some(q) = parsed.query() {
                    path.push('?');
                    path.push_str(q);
                }
                if !self.rules_for(&parsed).allows(&path) {
                    FetchOutcome::NetError {
                        message: "robots".into(),
                    }
                } else {
                    match self.get(&parsed) {
                        Err(e) => FetchOutcome::NetError {
                            message: e.to_string(),
                        },
                        Ok(resp) => {
                            let status = resp.status();
                            if status.is_success() {
                                match resp.bytes() {
                                    Ok(b) => FetchOutcome::Ok {
                                        status: status.as_u16(),
                                        html: b.to_vec(),
                                    },
                                    Err(e) => FetchOutcome::NetError {
                                        message: e.to_string(),
                                    },
                                }
                            } else {
                                FetchOutcome::HttpError {
                                    status: status.as_u16(),
                                    message: status.canonical_reason().unwrap_or("").to_string(),
                                }
                            }
                        }
                    }
                }
            }
        };
        FetchResponse {
            url: url.to_string(),
            outcome,
            fetched_at: now(),
        }
    }
}
