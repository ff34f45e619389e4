//! T-Graph: a leveled hierarchy of exemplary documents built bottom-up from
//! target pages. Level 0 holds the targets, level k+1 the pages linking to
//! level-k pages. A link is scored by the shallowest node it resembles.

mod persist;
mod provider;
mod similarity;
mod watchdog;

use std::collections::VecDeque;
use std::path::Path;

use crate::pagemodel::{LinkContext, PageDocument};

pub use persist::{load_tgraph, save_tgraph, FORMAT_VERSION};
pub use provider::{CorpusParentIndex, PageText, ParentLink, ParentProvider, StaticParentMap};
pub use similarity::{text_similarity, TermVector};
pub use watchdog::{watchdog_update, Experience, Watchdog, WatchdogConfig};

#[derive(Debug, thiserror::Error)]
pub enum TGraphError {
    #[error("no target documents given")]
    NoTargets,
    #[error("depth must be at least 1")]
    ZeroDepth,
    #[error("targets not resolvable by the parent provider: {}", .0.join(", "))]
    Unresolved(Vec<String>),
    #[error("parent map line {line}: {message}")]
    ParentMap { line: usize, message: String },
    #[error("malformed T-Graph file: {0}")]
    Malformed(String),
    #[error("unsupported T-Graph format version {found} (expected {expected})")]
    Version { found: u32, expected: u32 },
    #[error("no such file: {0}")]
    NotFound(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl TGraphError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        if source.kind() == std::io::ErrorKind::NotFound {
            TGraphError::NotFound(path.display().to_string())
        } else {
            TGraphError::Io {
                path: path.display().to_string(),
                source,
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OsmParams {
    pub osm_threshold: f64,
    pub unrelated_priority: f64,
}

impl Default for OsmParams {
    fn default() -> Self {
        OsmParams {
            osm_threshold: 0.05,
            unrelated_priority: 0.01,
        }
    }
}

/// The four stemmed term vectors compared by OSM.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Components {
    pub anchor: TermVector,
    pub surrounding: TermVector,
    pub title: TermVector,
    pub body: TermVector,
}

impl Components {
    pub fn from_texts(anchor: &str, surrounding: &str, title: &str, body: &str) -> Self {
        Components {
            anchor: TermVector::from_text(anchor),
            surrounding: TermVector::from_text(surrounding),
            title: TermVector::from_text(title),
            body: TermVector::from_text(body),
        }
    }

    /// Components of an unvisited link: its anchor and context, plus the
    /// title and body of the page it was found on.
    pub fn for_link(ctx: &LinkContext, parent: &PageDocument) -> Self {
        Self::from_texts(&ctx.anchor_text(), &ctx.text(), &parent.title, &parent.body_text())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TGraphNode {
    pub id: usize,
    /// 0 is the target level.
    pub level: usize,
    pub url: String,
    pub anchor_text: String,
    pub surrounding_text: String,
    pub title_text: String,
    pub body_text: String,
    components: Components,
}

impl TGraphNode {
    pub fn new(
        id: usize,
        level: usize,
        url: impl Into<String>,
        anchor_text: impl Into<String>,
        surrounding_text: impl Into<String>,
        title_text: impl Into<String>,
        body_text: impl Into<String>,
    ) -> Self {
        let (anchor_text, surrounding_text, title_text, body_text) = (
            anchor_text.into(),
            surrounding_text.into(),
            title_text.into(),
            body_text.into(),
        );
        let components = Components::from_texts(&anchor_text, &surrounding_text, &title_text, &body_text);
        TGraphNode {
            id,
            level,
            url: url.into(),
            anchor_text,
            surrounding_text,
            title_text,
            body_text,
            components,
        }
    }

    pub fn components(&self) -> &Components {
        &self.components
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TGraph {
    depth: usize,
    nodes: Vec<TGraphNode>,
    /// `(child, parent)`: the parent sits one level above the child.
    edges: Vec<(usize, usize)>,
    distance: Vec<Option<usize>>,
    /// Node ids by ascending distance to level 0, then id.
    search_order: Vec<usize>,
}

impl TGraph {
    /// Assembles a graph from parts, checking the structural laws.
    pub fn from_parts(
        depth: usize,
        nodes: Vec<TGraphNode>,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self, TGraphError> {
        for (idx, node) in nodes.iter().enumerate() {
            if node.id != idx {
                return Err(TGraphError::Malformed(format!("node {idx} has id {}", node.id)));
            }
        }
        for &(child, parent) in &edges {
            let (Some(c), Some(p)) = (nodes.get(child), nodes.get(parent)) else {
                return Err(TGraphError::Malformed(format!("edge {child}->{parent} references a missing node")));
            };
            if p.level != c.level + 1 {
                return Err(TGraphError::Malformed(format!(
                    "edge {child}->{parent} spans levels {}->{}",
                    c.level, p.level
                )));
            }
        }
        let mut graph = TGraph {
            depth,
            nodes,
            edges,
            distance: Vec::new(),
            search_order: Vec::new(),
        };
        graph.index();
        if let Some(orphan) = graph.distance.iter().position(Option::is_none) {
            return Err(TGraphError::Malformed(format!("node {orphan} has no path to level 0")));
        }
        Ok(graph)
    }

    fn index(&mut self) {
        let n = self.nodes.len();
        let mut up: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(child, parent) in &self.edges {
            up[child].push(parent);
        }
        let mut distance = vec![None; n];
        let mut queue = VecDeque::new();
        for node in self.nodes.iter().filter(|n| n.level == 0) {
            distance[node.id] = Some(0);
            queue.push_back(node.id);
        }
        while let Some(id) = queue.pop_front() {
            let d = distance[id].unwrap_or(0);
            for &p in &up[id] {
                if distance[p].is_none() {
                    distance[p] = Some(d + 1);
                    queue.push_back(p);
                }
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&id| (distance[id].unwrap_or(usize::MAX), id));
        self.distance = distance;
        self.search_order = order;
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn nodes(&self) -> &[TGraphNode] {
        &self.nodes
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn level_count(&self, level: usize) -> usize {
        self.nodes.iter().filter(|n| n.level == level).count()
    }

    /// Shortest edge count from `id` down to any level-0 node.
    pub fn distance_to_target(&self, id: usize) -> Option<usize> {
        self.distance.get(id).copied().flatten()
    }

    pub(crate) fn push_node(&mut self, node_fn: impl FnOnce(usize) -> TGraphNode, child: usize) -> usize {
        let id = self.nodes.len();
        self.nodes.push(node_fn(id));
        self.edges.push((child, id));
        self.index();
        id
    }
}

/// Parents kept per node when building; the rest are discarded.
pub const DEFAULT_MAX_PARENTS: usize = 5;

/// Bottom-up construction: targets form level 0, then each level's pages
/// are expanded with up to `max_parents_per_node` parents, in provider order.
pub fn build_tgraph(
    targets: &[String],
    provider: &dyn ParentProvider,
    depth: usize,
    max_parents_per_node: usize,
) -> Result<TGraph, TGraphError> {
    if targets.is_empty() {
        return Err(TGraphError::NoTargets);
    }
    if depth == 0 {
        return Err(TGraphError::ZeroDepth);
    }
    let unresolved: Vec<String> = targets
        .iter()
        .filter(|t| provider.page(t).is_none())
        .cloned()
        .collect();
    if !unresolved.is_empty() {
        return Err(TGraphError::Unresolved(unresolved));
    }

    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    for target in targets {
        let page = provider.page(target).unwrap_or_default();
        // A target's own anchor and surrounding text come from the first
        // page pointing at it, if any.
        let inbound = provider.parents(target).into_iter().next().unwrap_or_default();
        let id = nodes.len();
        nodes.push(TGraphNode::new(
            id,
            0,
            target.clone(),
            inbound.anchor,
            inbound.surrounding,
            page.title,
            page.body,
        ));
    }
    let mut frontier: Vec<usize> = (0..nodes.len()).collect();
    for level in 1..=depth {
        let mut next = Vec::new();
        for child in frontier {
            let child_url = nodes[child].url.clone();
            for parent in provider.parents(&child_url).into_iter().take(max_parents_per_node) {
                let id = nodes.len();
                nodes.push(TGraphNode::new(
                    id,
                    level,
                    parent.parent_url,
                    parent.anchor,
                    parent.surrounding,
                    parent.title,
                    parent.body,
                ));
                edges.push((child, id));
                next.push(id);
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    TGraph::from_parts(depth, nodes, edges)
}

/// Overall similarity: the mean of the anchor, surrounding-text, title and
/// body cosines.
pub fn compute_osm(link: &Components, node: &TGraphNode) -> f64 {
    let n = node.components();
    (text_similarity(&link.anchor, &n.anchor)
        + text_similarity(&link.surrounding, &n.surrounding)
        + text_similarity(&link.title, &n.title)
        + text_similarity(&link.body, &n.body))
        / 4.0
}

/// Priority of an on-topic link: the inverse of the smallest distance to
/// the target level over all nodes whose OSM reaches the threshold, or
/// `unrelated_priority` when none does.
pub fn score_link(link: &Components, graph: &TGraph, params: &OsmParams) -> f64 {
    for &id in &graph.search_order {
        let node = &graph.nodes[id];
        if compute_osm(link, node) >= params.osm_threshold {
            let d = graph.distance_to_target(id).unwrap_or(node.level);
            return 1.0 / d.max(1) as f64;
        }
    }
    params.unrelated_priority
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    #[derive(Default)]
    struct MapProvider {
        pages: HashMap<String, PageText>,
        parents: HashMap<String, Vec<ParentLink>>,
    }

    impl MapProvider {
        fn link(&mut self, child: &str, parent: &str, text: &str) {
            self.pages.entry(child.into()).or_default();
            self.pages.entry(parent.into()).or_default();
            self.parents.entry(child.into()).or_default().push(ParentLink {
                parent_url: parent.into(),
                anchor: text.into(),
                surrounding: text.into(),
                title: text.into(),
                body: text.into(),
            });
        }
    }

    impl ParentProvider for MapProvider {
        fn page(&self, url: &str) -> Option<PageText> {
            self.pages.get(url).cloned()
        }
        fn parents(&self, url: &str) -> Vec<ParentLink> {
            self.parents.get(url).cloned().unwrap_or_default()
        }
    }

    fn targets(urls: &[&str]) -> Vec<String> {
        urls.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn shared_parent_yields_two_nodes() {
        let mut p = MapProvider::default();
        p.link("t1", "hub", "english");
        p.link("t2", "hub", "grammar");
        let g = build_tgraph(&targets(&["t1", "t2"]), &p, 3, 5).unwrap();
        assert_eq!(g.nodes().iter().filter(|n| n.url == "hub").count(), 2);
        assert_eq!(g.level_count(0), 2);
        assert_eq!(g.level_count(1), 2);
    }

    #[test]
    fn no_parents_means_level_zero_only() {
        let mut p = MapProvider::default();
        p.pages.insert("t".into(), PageText::default());
        let g = build_tgraph(&targets(&["t"]), &p, 3, 5).unwrap();
        assert_eq!(g.nodes().len(), 1);
        assert!(g.edges().is_empty());
    }

    #[test]
    fn unresolved_target_is_named() {
        let p = MapProvider::default();
        let err = build_tgraph(&targets(&["http://gone.org/"]), &p, 3, 5).unwrap_err();
        assert!(err.to_string().contains("http://gone.org/"));
        assert!(matches!(build_tgraph(&[], &p, 3, 5), Err(TGraphError::NoTargets)));
    }

    #[test]
    fn fan_out_cap_applies_in_provider_order() {
        let mut p = MapProvider::default();
        for i in 0..8 {
            p.link("t", &format!("p{i}"), "x");
        }
        let g = build_tgraph(&targets(&["t"]), &p, 1, 5).unwrap();
        let urls: Vec<_> = g.nodes().iter().skip(1).map(|n| n.url.as_str()).collect();
        assert_eq!(urls, ["p0", "p1", "p2", "p3", "p4"]);
    }

    fn leveled_graph() -> TGraph {
        let nodes = vec![
            TGraphNode::new(0, 0, "t", "", "", "", "target words"),
            TGraphNode::new(1, 1, "a", "", "", "", "level one words"),
            TGraphNode::new(2, 2, "b", "", "", "", "level two words"),
            TGraphNode::new(3, 3, "c", "", "", "", "level three words"),
        ];
        TGraph::from_parts(3, nodes, vec![(0, 1), (1, 2), (2, 3)]).unwrap()
    }

    fn body_only(text: &str) -> Components {
        Components::from_texts("", "", "", text)
    }

    #[test]
    fn osm_mean_of_four() {
        let node = TGraphNode::new(0, 0, "u", "english", "english grammar", "title", "body text");
        let same = Components::from_texts("english", "english grammar", "title", "body text");
        assert!((compute_osm(&same, &node) - 1.0).abs() < 1e-12);
        let disjoint = Components::from_texts("zz", "yy", "xx", "ww");
        assert_eq!(compute_osm(&disjoint, &node), 0.0);
    }

    #[test]
    fn priority_is_inverse_distance() {
        let g = leveled_graph();
        assert_eq!(score_link(&body_only("two"), &g, &OsmParams::default()), 0.5);
        assert_eq!(score_link(&body_only("three"), &g, &OsmParams::default()), 1.0 / 3.0);
        assert_eq!(score_link(&body_only("one three"), &g, &OsmParams::default()), 1.0);
        assert_eq!(score_link(&body_only("target"), &g, &OsmParams::default()), 1.0);
        assert_eq!(score_link(&body_only("nothing"), &g, &OsmParams::default()), 0.01);
    }

    #[test]
    fn from_parts_rejects_bad_structure() {
        let nodes = vec![
            TGraphNode::new(0, 0, "t", "", "", "", ""),
            TGraphNode::new(1, 2, "x", "", "", "", ""),
        ];
        assert!(TGraph::from_parts(3, nodes.clone(), vec![(0, 1)]).is_err());
        assert!(TGraph::from_parts(3, nodes, vec![]).is_err());
    }
}
