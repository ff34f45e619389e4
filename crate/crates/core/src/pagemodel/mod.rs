//! HTML document model and link-context extraction.
//!
//! A parsed page keeps one flat stream of lower-cased body tokens plus the
//! block structure that matters for link context: each `<p>` is a segment,
//! and each `<ul>`/`<ol>` is a segment holding the tokens of all its items.
//! Text outside both falls back to a fixed token window around the anchor.

mod context;
mod url;

use ::url::Url;
use ego_tree::iter::Edge;
use scraper::{Html, Node};
use serde::{Deserialize, Serialize};

pub use self::context::{extract_context, BoundaryKind, ContextToken, LinkContext};
pub use self::url::{is_http, normalize_url, UrlError};
pub use crate::text::tokenize;

/// Default half-width of the token window for links outside paragraphs and lists.
pub const DEFAULT_CONTEXT_WINDOW: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContainerKind {
    Paragraph,
    ListItem,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Link {
    pub target: String,
    pub anchor_tokens: Vec<String>,
    pub container: ContainerKind,
    /// Offset of the anchor's first token within its container. For
    /// `Other` the container is the whole body.
    pub position: usize,
    segment: Option<usize>,
    body_offset: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SegmentKind {
    Paragraph,
    List,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Segment {
    kind: SegmentKind,
    /// Indices into `body_tokens`, ascending.
    tokens: Vec<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PageDocument {
    pub url: String,
    pub title: String,
    pub body_tokens: Vec<String>,
    pub links: Vec<Link>,
    /// Links skipped because their href could not be resolved.
    pub dropped_links: usize,
    segments: Vec<Segment>,
}

impl PageDocument {
    pub fn title_tokens(&self) -> Vec<String> {
        tokenize(&self.title)
    }

    pub fn body_text(&self) -> String {
        self.body_tokens.join(" ")
    }
}

const SKIPPED: &[&str] = &["script", "style", "noscript", "template", "head"];

struct OpenLink {
    href: Option<String>,
    start: usize,
    segment: Option<usize>,
    position: usize,
}

/// Parses arbitrary bytes as HTML. Never fails: bytes are decoded lossily
/// and the HTML5 tree builder repairs broken markup.
pub fn parse_document(html: &[u8], base_url: &str) -> PageDocument {
    let text = String::from_utf8_lossy(html);
    let parsed = Html::parse_document(&text);
    let base = Url::parse(base_url.trim()).ok();
    let url = base
        .as_ref()
        .and_then(|b| url::normalize_against("", b).ok())
        .unwrap_or_else(|| base_url.trim().to_string());

    let mut doc = PageDocument {
        url,
        ..PageDocument::default()
    };
    let mut title = String::new();
    let mut skip_depth = 0usize;
    let mut in_title = 0usize;
    // Innermost block owning new tokens: paragraph or list segment.
    let mut owners: Vec<Option<usize>> = vec![None];
    let mut lists: Vec<usize> = Vec::new();
    let mut open_links: Vec<OpenLink> = Vec::new();

    for edge in parsed.tree.root().traverse() {
        match edge {
            Edge::Open(node) => match node.value() {
                Node::Element(el) => {
                    let name = el.name();
                    if name == "title" {
                        in_title += 1;
                    }
                    if SKIPPED.contains(&name) {
                        skip_depth += 1;
                        continue;
                    }
                    if skip_depth > 0 {
                        continue;
                    }
                    match name {
                        "p" => {
                            doc.segments.push(Segment {
                                kind: SegmentKind::Paragraph,
                                tokens: Vec::new(),
                            });
                            owners.push(Some(doc.segments.len() - 1));
                        }
                        "ul" | "ol" => {
                            doc.segments.push(Segment {
                                kind: SegmentKind::List,
                                tokens: Vec::new(),
                            });
                            lists.push(doc.segments.len() - 1);
                        }
                        "li" => owners.push(lists.last().copied()),
                        "a" => {
                            let owner = owners.last().copied().flatten();
                            let position = match owner {
                                Some(s) => doc.segments[s].tokens.len(),
                                None => doc.body_tokens.len(),
                            };
                            let nofollow = el
                                .attr("rel")
                                .is_some_and(|r| r.split_whitespace().any(|v| v.eq_ignore_ascii_case("nofollow")));
                            let href = if nofollow { None } else { el.attr("href").map(str::to_string) };
                            open_links.push(OpenLink {
                                href,
                                start: doc.body_tokens.len(),
                                segment: owner,
                                position,
                            });
                        }
                        _ => {}
                    }
                }
                Node::Text(t) => {
                    if in_title > 0 {
                        title.push_str(t);
                    }
                    if skip_depth > 0 {
                        continue;
                    }
                    let owner = owners.last().copied().flatten();
                    for token in tokenize(t) {
                        if let Some(s) = owner {
                            doc.segments[s].tokens.push(doc.body_tokens.len());
                        }
                        doc.body_tokens.push(token);
                    }
                }
                _ => {}
            },
            Edge::Close(node) => {
                if let Node::Element(el) = node.value() {
                    let name = el.name();
                    if name == "title" {
                        in_title = in_title.saturating_sub(1);
                    }
                    if SKIPPED.contains(&name) {
                        skip_depth = skip_depth.saturating_sub(1);
                        continue;
                    }
                    if skip_depth > 0 {
                        continue;
                    }
                    match name {
                        "p" | "li" => {
                            owners.pop();
                        }
                        "ul" | "ol" => {
                            lists.pop();
                        }
                        "a" => {
                            if let Some(open) = open_links.pop() {
                                finish_link(&mut doc, base.as_ref(), open);
                            }
                        }
                        _ => {}
                    }
                }
            }
        }
    }
    doc.title = tokenize(&title).join(" ");
    doc
}

fn finish_link(doc: &mut PageDocument, base: Option<&Url>, open: OpenLink) {
    let Some(href) = open.href else { return };
    let resolved = match base {
        Some(b) => url::normalize_against(&href, b),
        None => Url::parse(href.trim())
            .map(|mut u| {
                u.set_fragment(None);
                u.into()
            })
            .map_err(|e| UrlError::Unparsable {
                raw: href.clone(),
                reason: e.to_string(),
            }),
    };
    let target = match resolved {
        Ok(t) => t,
        Err(_) => {
            doc.dropped_links += 1;
            return;
        }
    };
    if !is_http(&target) {
        return;
    }
    let anchor_tokens = doc.body_tokens[open.start..].to_vec();
    let container = match open.segment.map(|s| doc.segments[s].kind) {
        Some(SegmentKind::Paragraph) => ContainerKind::Paragraph,
        Some(SegmentKind::List) => ContainerKind::ListItem,
        None => ContainerKind::Other,
    };
    doc.links.push(Link {
        target,
        anchor_tokens,
        container,
        position: open.position,
        segment: open.segment,
        body_offset: open.start,
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paragraph_link() {
        let doc = parse_document(
            br#"<p>learn <a href="/g">grammar</a> here</p>"#,
            "http://x.org/",
        );
        assert_eq!(doc.links.len(), 1);
        let link = &doc.links[0];
        assert_eq!(link.target, "http://x.org/g");
        assert_eq!(link.anchor_tokens, ["grammar"]);
        assert_eq!(link.container, ContainerKind::Paragraph);
        assert_eq!(link.position, 1);
        assert_eq!(doc.body_tokens, ["learn", "grammar", "here"]);
    }

    #[test]
    fn list_item_link() {
        let doc = parse_document(b"<ul><li><a href=a>A</a></li><li>b</li></ul>", "http://x.org/");
        assert_eq!(doc.links.len(), 1);
        assert_eq!(doc.links[0].container, ContainerKind::ListItem);
        assert_eq!(doc.links[0].target, "http://x.org/a");
    }

    #[test]
    fn tag_soup_is_tolerated() {
        let doc = parse_document(b"<p>text <a href=", "http://x.org/");
        assert!(doc.links.is_empty());
        assert_eq!(doc.body_tokens, ["text"]);
    }

    #[test]
    fn empty_and_binary_input() {
        let doc = parse_document(b"", "http://x.org/");
        assert!(doc.body_tokens.is_empty() && doc.links.is_empty());
        let doc = parse_document(&[0xff, 0xfe, b'<', b'p', b'>', b'h', b'i'], "http://x.org/");
        assert!(doc.body_tokens.contains(&"hi".to_string()));
    }

    #[test]
    fn title_script_and_style() {
        let doc = parse_document(
            b"<html><head><title>English Grammar</title><style>p{}</style></head>\
              <body><script>var grammar=1;</script><p>Words</p></body></html>",
            "http://x.org/",
        );
        assert_eq!(doc.title, "english grammar");
        assert_eq!(doc.body_tokens, ["words"]);
    }

    #[test]
    fn hygiene_filters() {
        let doc = parse_document(
            br#"<p><a href="mailto:a@b.c">m</a> <a rel="nofollow" href="/n">n</a>
                <a href="javascript:void(0)">j</a> <a href="ftp://x.org/f">f</a>
                <a href="https://x.org/ok#top">ok</a> <a>no href</a></p>"#,
            "http://x.org/",
        );
        let targets: Vec<_> = doc.links.iter().map(|l| l.target.as_str()).collect();
        assert_eq!(targets, ["https://x.org/ok"]);
    }

    #[test]
    fn unresolvable_href_is_counted() {
        let doc = parse_document(br#"<p><a href="http://[::1">x</a></p>"#, "http://x.org/");
        assert!(doc.links.is_empty());
        assert_eq!(doc.dropped_links, 1);
    }

    #[test]
    fn image_link_has_empty_anchor() {
        let doc = parse_document(br#"<p>see <a href="/i"><img src="i.png"></a> now</p>"#, "http://x.org/");
        assert_eq!(doc.links.len(), 1);
        assert!(doc.links[0].anchor_tokens.is_empty());
        assert_eq!(doc.links[0].position, 1);
    }

    #[test]
    fn url_is_canonical() {
        let doc = parse_document(b"", "HTTP://X.org:80/a/../b#f");
        assert_eq!(doc.url, "http://x.org/b");
    }
}
