//! Synthetic clustered corpora.
//!
//! Layout: `cluster_count` on-topic clusters of `cluster_size` pages. Each
//! cluster page links to the next one (a ring) plus a few random cluster
//! mates, inside on-topic paragraphs, and to off-topic filler pages from a
//! `<ul>` of off-topic text. Fillers are split into one region per cluster
//! and only link inside their region. Cluster `i` reaches cluster `i + 1`
//! only through a chain of `bridge_length` off-topic pages that starts at
//! one page of cluster `i`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::crawl::{write_manifest, ManifestEntry};
use crate::pagemodel::{extract_context, parse_document, DEFAULT_CONTEXT_WINDOW};
use crate::taxonomy::{TopicProfile, BUNDLED_TAXONOMY};
use crate::topic::match_profile;

use super::{EvalError, LabelSet};

const NEUTRAL: &[&str] = &[
    "the", "and", "of", "with", "for", "this", "page", "more", "about", "see", "also", "here",
    "read", "new", "our", "from", "on", "in", "a", "to", "is", "some", "notes", "list",
];

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusSpec {
    pub total_pages: usize,
    pub cluster_count: usize,
    pub cluster_size: usize,
    pub bridge_length: usize,
    pub on_topic_pool: Vec<String>,
    pub off_topic_pool: Vec<String>,
    pub rng_seed: u64,
    /// Random cluster-mate links per cluster page, on top of the ring link.
    pub intra_links: usize,
    /// Filler links per cluster page.
    pub off_links: usize,
    /// Links per filler or bridge page into its region.
    pub filler_links: usize,
    pub host: String,
}

impl Default for CorpusSpec {
    fn default() -> Self {
        let (on, off) = default_pools();
        CorpusSpec {
            total_pages: 2000,
            cluster_count: 10,
            cluster_size: 20,
            bridge_length: 3,
            on_topic_pool: on,
            off_topic_pool: off,
            rng_seed: 7,
            intra_links: 1,
            off_links: 6,
            filler_links: 6,
            host: "corpus.test".into(),
        }
    }
}

/// Single-word terms of the bundled taxonomy, split by whether their codes
/// fall in the English-language profile.
pub fn default_pools() -> (Vec<String>, Vec<String>) {
    let profile = TopicProfile::english_language(3);
    let (mut on, mut off) = (Vec::new(), Vec::new());
    for line in BUNDLED_TAXONOMY.lines() {
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        let code = cols[0].split('.').next().unwrap_or("");
        if code.len() != 3 || cols[0].contains('.') {
            // Fractional codes share terms with whole ones; keep pools clean.
            continue;
        }
        let pool = if match_profile(code, &profile).is_some() {
            &mut on
        } else {
            &mut off
        };
        pool.extend(
            cols[2]
                .split(',')
                .map(str::trim)
                .filter(|t| !t.contains(' ') && *t != "clothing")
                .map(String::from),
        );
    }
    (on, off)
}

impl CorpusSpec {
    /// `key = value` lines; pools are comma-separated.
    pub fn parse(text: &str) -> Result<Self, EvalError> {
        let mut spec = CorpusSpec::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |m: String| EvalError::Spec(format!("line {}: {m}", idx + 1));
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad("expected key = value".into()))?;
            let (key, value) = (key.trim(), value.trim());
            let int = || value.parse::<usize>().map_err(|e| bad(format!("{key}: {e}")));
            let pool = || -> Vec<String> {
                value
                    .split(',')
                    .map(str::trim)
                    .filter(|w| !w.is_empty())
                    .map(String::from)
                    .collect()
            };
            match key {
                "total_pages" => spec.total_pages = int()?,
                "cluster_count" => spec.cluster_count = int()?,
                "cluster_size" => spec.cluster_size = int()?,
                "bridge_length" => spec.bridge_length = int()?,
                "intra_links" => spec.intra_links = int()?,
                "off_links" => spec.off_links = int()?,
                "filler_links" => spec.filler_links = int()?,
                "rng_seed" => {
                    spec.rng_seed = value.parse().map_err(|e| bad(format!("rng_seed: {e}")))?
                }
                "on_topic_pool" => spec.on_topic_pool = pool(),
                "off_topic_pool" => spec.off_topic_pool = pool(),
                "host" => spec.host = value.to_string(),
                other => return Err(bad(format!("unknown key {other:?}"))),
            }
        }
        Ok(spec)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, EvalError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| EvalError::io(path, e))?;
        Self::parse(&text)
    }

    fn bridge_pages(&self) -> usize {
        self.cluster_count.saturating_sub(1) * self.bridge_length
    }

    pub fn filler_pages(&self) -> usize {
        self.total_pages - self.cluster_count * self.cluster_size - self.bridge_pages()
    }

    pub fn validate(&self) -> Result<(), EvalError> {
        let err = |m: &str| Err(EvalError::Spec(m.into()));
        if self.cluster_count == 0 || self.cluster_size == 0 {
            return err("cluster_count and cluster_size must be at least 1");
        }
        if self.total_pages < self.cluster_count * self.cluster_size + self.bridge_pages() {
            return err("total_pages is smaller than the clusters plus their bridges");
        }
        if self.on_topic_pool.is_empty() || self.off_topic_pool.is_empty() {
            return err("token pools must not be empty");
        }
        if self.host.is_empty() || self.host.contains(['/', ' ']) {
            return err("host must be a bare host name");
        }
        Ok(())
    }
}

/// What [`gen_corpus`] wrote.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedCorpus {
    pub dir: PathBuf,
    pub manifest: PathBuf,
    pub labels_path: PathBuf,
    pub parents: PathBuf,
    pub seeds_path: PathBuf,
    pub targets_path: PathBuf,
    pub taxonomy: PathBuf,
    pub config: PathBuf,
    /// Page URLs per cluster, head first.
    pub clusters: Vec<Vec<String>>,
    /// Bridge chain from cluster `i` to `i + 1`, in link order.
    pub bridges: Vec<Vec<String>>,
    pub fillers: Vec<String>,
    pub labels: LabelSet,
    pub seeds: Vec<String>,
    pub targets: Vec<String>,
}

struct Page {
    url: String,
    file: String,
    html: String,
}

struct Text<'a> {
    rng: ChaCha8Rng,
    on: &'a [String],
    off: &'a [String],
}

impl Text<'_> {
    /// `n` words, about two thirds drawn from the pool.
    fn words(&mut self, n: usize, on_topic: bool) -> String {
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            let word = if self.rng.random_bool(0.65) {
                let pool = if on_topic { self.on } else { self.off };
                pool.choose(&mut self.rng).expect("pool checked").as_str()
            } else {
                NEUTRAL.choose(&mut self.rng).expect("non-empty")
            };
            out.push(word);
        }
        out.join(" ")
    }

    fn pool_words(&mut self, n: usize, on_topic: bool) -> String {
        let pool = if on_topic { self.on } else { self.off };
        (0..n)
            .map(|_| pool.choose(&mut self.rng).expect("pool checked").as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }

    fn pick<'u>(&mut self, urls: &'u [String]) -> Option<&'u String> {
        urls.choose(&mut self.rng)
    }
}

fn page_html(title: &str, body: &str) -> String {
    format!("<!DOCTYPE html>\n<html><head><title>{title}</title></head>\n<body>\n{body}</body></html>\n")
}

fn link(href: &str, anchor: &str) -> String {
    format!("<a href=\"{href}\">{anchor}</a>")
}

/// Writes a corpus into `out`: `pages/`, `manifest.jsonl`, `labels.tsv`,
/// `parents.tsv`, `seeds.txt` (cluster heads), `targets.txt`,
/// `taxonomy.tsv` and a ready-to-run `crawl.conf`. The corpus spec is validated
/// before anything is written; output is a pure function of the spec.
pub fn gen_corpus(spec: &CorpusSpec, out: impl AsRef<Path>) -> Result<GeneratedCorpus, EvalError> {
    spec.validate()?;
    let out = out.as_ref();
    let mut text = Text {
        rng: ChaCha8Rng::seed_from_u64(spec.rng_seed),
        on: &spec.on_topic_pool,
        off: &spec.off_topic_pool,
    };
    let base = format!("http://{}", spec.host);

    let clusters: Vec<Vec<String>> = (0..spec.cluster_count)
        .map(|c| {
            (0..spec.cluster_size)
                .map(|p| format!("{base}/c{c}/p{p}.html"))
                .collect()
        })
        .collect();
    let bridges: Vec<Vec<String>> = (0..spec.cluster_count.saturating_sub(1))
        .map(|c| {
            (0..spec.bridge_length)
                .map(|k| format!("{base}/b{c}/{k}.html"))
                .collect()
        })
        .collect();
    let mut regions: Vec<Vec<String>> = vec![Vec::new(); spec.cluster_count];
    for n in 0..spec.filler_pages() {
        let r = n % spec.cluster_count;
        let k = regions[r].len();
        regions[r].push(format!("{base}/f{r}/{k}.html"));
    }
    // The cluster page that holds the link into each bridge (or straight to
    // the next head when bridges are empty).
    let exits: Vec<usize> = bridges
        .iter()
        .map(|_| text.rng.random_range(0..spec.cluster_size))
        .collect();

    let file_of = |url: &str| {
        let rel = url.trim_start_matches(&base).trim_start_matches('/');
        format!("pages/{}", rel.replace('/', "-"))
    };
    let mut pages: Vec<Page> = Vec::new();

    for (c, members) in clusters.iter().enumerate() {
        for (p, url) in members.iter().enumerate() {
            let mut targets = vec![members[(p + 1) % members.len()].clone()];
            for _ in 0..spec.intra_links {
                let t = text.pick(members).expect("non-empty").clone();
                if t != *url && !targets.contains(&t) {
                    targets.push(t);
                }
            }
            if members.len() == 1 {
                targets.clear();
            }
            let mut body = String::new();
            for t in &targets {
                let _ = writeln!(
                    body,
                    "<p>{} {} {}</p>",
                    text.words(22, true),
                    link(t, &text.pool_words(2, true)),
                    text.words(8, true)
                );
            }
            let _ = writeln!(body, "<p>{}</p>", text.words(24, true));
            if c + 1 < spec.cluster_count && exits[c] == p && spec.bridge_length == 0 {
                let _ = writeln!(
                    body,
                    "<p>{} {}</p>",
                    text.words(12, true),
                    link(&clusters[c + 1][0], &text.pool_words(2, true))
                );
            }
            let mut items = Vec::new();
            for _ in 0..spec.off_links {
                if let Some(f) = text.pick(&regions[c]) {
                    items.push(f.clone());
                }
            }
            if c + 1 < spec.cluster_count && exits[c] == p && spec.bridge_length > 0 {
                items.push(bridges[c][0].clone());
            }
            if !items.is_empty() {
                body.push_str("<ul>\n");
                for f in items {
                    let _ = writeln!(
                        body,
                        "<li>{} {}</li>",
                        text.words(4, false),
                        link(&f, &text.pool_words(2, false))
                    );
                }
                body.push_str("</ul>\n");
            }
            let title = text.pool_words(3, true);
            pages.push(Page {
                url: url.clone(),
                file: file_of(url),
                html: page_html(&title, &body),
            });
        }
    }

    let mut off_page = |text: &mut Text, url: &str, region: &[String], extra: Option<&String>| {
        let mut targets: Vec<String> = Vec::new();
        if let Some(e) = extra {
            targets.push(e.clone());
        }
        for _ in 0..spec.filler_links {
            if let Some(f) = text.pick(region) {
                if f != url && !targets.contains(f) {
                    targets.push(f.clone());
                }
            }
        }
        let mut body = String::new();
        for t in &targets {
            let _ = writeln!(
                body,
                "<p>{} {} {}</p>",
                text.words(14, false),
                link(t, &text.pool_words(2, false)),
                text.words(6, false)
            );
        }
        let _ = writeln!(body, "<p>{}</p>", text.words(20, false));
        let title = text.pool_words(3, false);
        pages.push(Page {
            url: url.to_string(),
            file: file_of(url),
            html: page_html(&title, &body),
        });
    };

    for (c, chain) in bridges.iter().enumerate() {
        for (k, url) in chain.iter().enumerate() {
            let next = chain.get(k + 1).unwrap_or(&clusters[c + 1][0]);
            off_page(&mut text, url, &regions[c], Some(next));
        }
    }
    for region in &regions {
        for (k, url) in region.iter().enumerate() {
            // The chain to the next filler keeps every region page reachable.
            off_page(&mut text, url, region, region.get(k + 1));
        }
    }

    let fillers: Vec<String> = regions.into_iter().flatten().collect();
    let mut labels = LabelSet::default();
    for p in &pages {
        labels.insert(&p.url, false);
    }
    for url in clusters.iter().flatten() {
        labels.insert(url, true);
    }
    let seeds: Vec<String> = clusters.iter().map(|c| c[0].clone()).collect();
    let targets: Vec<String> = clusters
        .iter()
        .take(4)
        .map(|c| c.last().expect("non-empty").clone())
        .collect();

    let pages_dir = out.join("pages");
    std::fs::create_dir_all(&pages_dir).map_err(|e| EvalError::io(&pages_dir, e))?;
    let mut manifest = Vec::new();
    let mut parents = String::from("# child\tparent\tanchor\tsurrounding\ttitle\tbody\n");
    for p in &pages {
        let path = out.join(&p.file);
        std::fs::write(&path, &p.html).map_err(|e| EvalError::io(&path, e))?;
        manifest.push(ManifestEntry {
            url: p.url.clone(),
            path: p.file.clone(),
            status: 200,
        });
        let doc = parse_document(p.html.as_bytes(), &p.url);
        for l in &doc.links {
            let Ok(ctx) = extract_context(&doc, l, DEFAULT_CONTEXT_WINDOW) else { continue };
            let _ = writeln!(
                parents,
                "{}\t{}\t{}\t{}\t{}\t{}",
                l.target,
                doc.url,
                ctx.anchor_text(),
                ctx.text(),
                doc.title,
                p.file
            );
        }
    }

    let write = |name: &str, contents: &str| -> Result<PathBuf, EvalError> {
        let path = out.join(name);
        std::fs::write(&path, contents).map_err(|e| EvalError::io(&path, e))?;
        Ok(path)
    };
    let manifest_path = out.join("manifest.jsonl");
    write_manifest(&manifest_path, &manifest).map_err(|e| EvalError::Spec(e.to_string()))?;
    let lines = |urls: &[String]| urls.iter().map(|u| format!("{u}\n")).collect::<String>();
    let config = format!(
        "# corpus crawl; generated\n\
         taxonomy = taxonomy.tsv\n\
         corpus = manifest.jsonl\n\
         seeds = seeds.txt\n\
         targets = targets.txt\n\
         labels = labels.tsv\n\
         output = crawl\n\
         fetch_mode = corpus\n\
         strategy = treasure\n\
         page_budget = {}\n",
        (spec.total_pages / 2).max(1)
    );
    Ok(GeneratedCorpus {
        dir: out.to_path_buf(),
        manifest: manifest_path,
        labels_path: write("labels.tsv", &labels.to_tsv())?,
        parents: write("parents.tsv", &parents)?,
        seeds_path: write("seeds.txt", &lines(&seeds))?,
        targets_path: write("targets.txt", &lines(&targets))?,
        taxonomy: write("taxonomy.tsv", BUNDLED_TAXONOMY)?,
        config: write("crawl.conf", &config)?,
        clusters,
        bridges,
        fillers,
        labels,
        seeds,
        targets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::taxonomy::Taxonomy;

    fn small(seed: u64) -> CorpusSpec {
        CorpusSpec {
            total_pages: 100,
            cluster_count: 2,
            cluster_size: 40,
            bridge_length: 3,
            rng_seed: seed,
            ..CorpusSpec::default()
        }
    }

    #[test]
    fn pools_are_cleanly_separated() {
        let taxonomy = Taxonomy::bundled();
        let profile = TopicProfile::english_language(3);
        let (on, off) = default_pools();
        assert!(on.len() > 50 && off.len() > 50);
        for (pool, expect) in [(&on, true), (&off, false)] {
            for w in pool {
                let hits = taxonomy.lookup_terms(&[w.as_str()]);
                assert_eq!(hits.len(), 1, "{w} is not a taxonomy term");
                for code in &hits[0].codes {
                    let m = match_profile(&code.truncate(3).to_string(), &profile).is_some();
                    assert_eq!(m, expect, "{w} -> {code}");
                }
            }
        }
    }

    #[test]
    fn deterministic_and_shaped() {
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        let ga = gen_corpus(&small(7), a.path()).unwrap();
        gen_corpus(&small(7), b.path()).unwrap();
        for f in ["manifest.jsonl", "labels.tsv", "parents.tsv", "pages/c1-p3.html"] {
            assert_eq!(
                std::fs::read(a.path().join(f)).unwrap(),
                std::fs::read(b.path().join(f)).unwrap(),
                "{f}"
            );
        }
        assert_eq!(ga.fillers.len() + ga.bridges[0].len(), 20);
        assert_eq!(ga.bridges[0].len(), 3);
        assert!(ga.bridges[0].iter().all(|u| ga.labels.get(u) == Some(false)));
        assert_eq!(ga.labels.iter().filter(|(_, b)| *b).count(), 80);
    }

    #[test]
    fn invalid_spec_writes_nothing() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("c");
        let spec = CorpusSpec {
            total_pages: 50,
            ..small(1)
        };
        assert!(gen_corpus(&spec, &out).is_err());
        assert!(!out.exists());
    }

    #[test]
    fn spec_file_parses() {
        let s = CorpusSpec::parse("total_pages = 300\nrng_seed = 9 # seed\non_topic_pool = grammar, syntax\n").unwrap();
        assert_eq!(s.total_pages, 300);
        assert_eq!(s.rng_seed, 9);
        assert_eq!(s.on_topic_pool, vec!["grammar", "syntax"]);
        assert!(CorpusSpec::parse("pages = 3").is_err());
    }
}
