use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use crate::crawl::corpus::Corpus;
use crate::pagemodel::{extract_context, normalize_url, parse_document, DEFAULT_CONTEXT_WINDOW};

use super::TGraphError;

/// Title and body of a page, as plain text.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PageText {
    pub title: String,
    pub body: String,
}

/// One page linking to a child URL, with the texts a T-Graph node stores.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParentLink {
    pub parent_url: String,
    pub anchor: String,
    pub surrounding: String,
    pub title: String,
    pub body: String,
}

/// Answers "which pages link to this URL". Implementations must return
/// parents in a stable order for a fixed backing store.
pub trait ParentProvider {
    /// The page's own texts, or `None` if the provider knows nothing about it.
    fn page(&self, url: &str) -> Option<PageText>;
    fn parents(&self, url: &str) -> Vec<ParentLink>;
}

fn canonical(url: &str) -> String {
    normalize_url(url, url).unwrap_or_else(|_| url.trim().to_string())
}

/// Parent map read from TSV:
/// `child_url \t parent_url \t anchor \t surrounding \t title \t body_path`,
/// with `body_path` relative to the TSV file.
#[derive(Debug, Clone, Default)]
pub struct StaticParentMap {
    parents: HashMap<String, Vec<ParentLink>>,
    pages: BTreeMap<String, PageText>,
}

impl StaticParentMap {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, TGraphError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| TGraphError::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, |body_path| {
            let full = base.join(body_path);
            std::fs::read(&full).map_err(|e| TGraphError::io(&full, e))
        })
    }

    /// Parses the TSV, reading page bodies through `read_body`.
    pub fn parse(
        text: &str,
        mut read_body: impl FnMut(&str) -> Result<Vec<u8>, TGraphError>,
    ) -> Result<Self, TGraphError> {
        let mut map = StaticParentMap::default();
        let mut bodies: HashMap<String, String> = HashMap::new();
        for (idx, line) in text.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split('\t').collect();
            if cols.len() != 6 {
                return Err(TGraphError::ParentMap {
                    line: idx + 1,
                    message: format!("expected 6 columns, found {}", cols.len()),
                });
            }
            let child = canonical(cols[0]);
            let parent_url = canonical(cols[1]);
            let body = match bodies.get(cols[5]) {
                Some(b) => b.clone(),
                None if cols[5].is_empty() => String::new(),
                None => {
                    let raw = read_body(cols[5])?;
                    let body = parse_document(&raw, &parent_url).body_text();
                    bodies.insert(cols[5].to_string(), body.clone());
                    body
                }
            };
            let link = ParentLink {
                parent_url: parent_url.clone(),
                anchor: cols[2].to_string(),
                surrounding: cols[3].to_string(),
                title: cols[4].to_string(),
                body,
            };
            map.pages.entry(child.clone()).or_default();
            let page = map.pages.entry(parent_url).or_default();
            if page.title.is_empty() && page.body.is_empty() {
                page.title = link.title.clone();
                page.body = link.body.clone();
            }
            map.parents.entry(child).or_default().push(link);
        }
        Ok(map)
    }
}

impl ParentProvider for StaticParentMap {
    fn page(&self, url: &str) -> Option<PageText> {
        self.pages.get(&canonical(url)).cloned()
    }

    fn parents(&self, url: &str) -> Vec<ParentLink> {
        self.parents.get(&canonical(url)).cloned().unwrap_or_default()
    }
}

/// Link-inversion index over a local corpus. Parents are ordered by
/// parent URL, then by link order within the parent.
#[derive(Debug, Clone, Default)]
pub struct CorpusParentIndex {
    pages: HashMap<String, PageText>,
    parents: HashMap<String, Vec<ParentLink>>,
}

impl CorpusParentIndex {
    pub fn build(corpus: &Corpus) -> Self {
        let mut index = CorpusParentIndex::default();
        let mut urls: Vec<&String> = corpus.urls().collect();
        urls.sort();
        for url in urls {
            let Some(html) = corpus.html(url) else { continue };
            let doc = parse_document(&html, url);
            let page = PageText {
                title: doc.title.clone(),
                body: doc.body_text(),
            };
            for link in &doc.links {
                let Ok(ctx) = extract_context(&doc, link, DEFAULT_CONTEXT_WINDOW) else {
                    continue;
                };
                index.parents.entry(link.target.clone()).or_default().push(ParentLink {
                    parent_url: doc.url.clone(),
                    anchor: ctx.anchor_text(),
                    surrounding: ctx.text(),
                    title: page.title.clone(),
                    body: page.body.clone(),
                });
            }
            index.pages.insert(doc.url.clone(), page);
        }
        index
    }
}

impl ParentProvider for CorpusParentIndex {
    fn page(&self, url: &str) -> Option<PageText> {
        self.pages.get(&canonical(url)).cloned()
    }

    fn parents(&self, url: &str) -> Vec<ParentLink> {
        self.parents.get(&canonical(url)).cloned().unwrap_or_default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn static_map_parses_and_reads_bodies() {
        let tsv = "# child\tparent\tanchor\tsurrounding\ttitle\tbody\n\
                   http://a.org/t\thttp://a.org/p\tgrammar\tlearn grammar here\tParent\tp.html\n\
                   http://A.org/p\thttp://a.org/gp\tparent\tsee parent\tGrand\t\n";
        let map = StaticParentMap::parse(tsv, |path| {
            assert_eq!(path, "p.html");
            Ok(b"<p>english grammar body</p>".to_vec())
        })
        .unwrap();
        let parents = map.parents("http://a.org/t");
        assert_eq!(parents.len(), 1);
        assert_eq!(parents[0].body, "english grammar body");
        assert_eq!(map.page("http://a.org/p").unwrap().title, "Parent");
        assert!(map.page("http://a.org/t").is_some());
        assert!(map.page("http://a.org/unknown").is_none());
        assert_eq!(map.parents("http://a.org/p")[0].parent_url, "http://a.org/gp");
    }

    #[test]
    fn static_map_rejects_short_rows() {
        let err = StaticParentMap::parse("a\tb\tc\n", |_| Ok(Vec::new())).unwrap_err();
        assert!(matches!(err, TGraphError::ParentMap { line: 1, .. }));
    }
}
