use super::{compute_osm, Components, TGraph, TGraphNode};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WatchdogConfig {
    pub enabled: bool,
    /// Pages processed between updates.
    pub interval: usize,
    pub promote_threshold: f64,
    /// Cap on nodes added over the whole run.
    pub max_nodes: usize,
}

impl Default for WatchdogConfig {
    fn default() -> Self {
        WatchdogConfig {
            enabled: false,
            interval: 500,
            promote_threshold: 0.5,
            max_nodes: 20,
        }
    }
}

/// A crawled page as seen by the watchdog.
#[derive(Debug, Clone, PartialEq)]
pub struct Experience {
    pub url: String,
    pub on_topic: bool,
    pub anchor_text: String,
    pub surrounding_text: String,
    pub title_text: String,
    pub body_text: String,
}

impl Experience {
    fn components(&self) -> Components {
        Components::from_texts(
            &self.anchor_text,
            &self.surrounding_text,
            &self.title_text,
            &self.body_text,
        )
    }
}

/// Appends qualifying on-topic pages as level-1 nodes, each linked to the
/// level-0 node it resembles most. `already_added` counts earlier additions
/// against `max_nodes`. Existing nodes are never touched.
pub fn watchdog_update(
    graph: &TGraph,
    experience: &[Experience],
    config: &WatchdogConfig,
    already_added: usize,
) -> TGraph {
    let mut updated = graph.clone();
    if !config.enabled {
        return updated;
    }
    let mut budget = config.max_nodes.saturating_sub(already_added);
    let targets: Vec<&TGraphNode> = graph.nodes().iter().filter(|n| n.level == 0).collect();
    for page in experience.iter().filter(|e| e.on_topic) {
        if budget == 0 {
            break;
        }
        let comps = page.components();
        let best = targets
            .iter()
            .map(|t| (compute_osm(&comps, t), t.id))
            .filter(|(osm, _)| *osm >= config.promote_threshold)
            .max_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)));
        if let Some((_, target)) = best {
            updated.push_node(
                |id| {
                    TGraphNode::new(
                        id,
                        1,
                        page.url.clone(),
                        page.anchor_text.clone(),
                        page.surrounding_text.clone(),
                        page.title_text.clone(),
                        page.body_text.clone(),
                    )
                },
                target,
            );
            budget -= 1;
        }
    }
    updated
}

/// Tracks processed pages and produces a new graph generation every
/// `interval` pages.
#[derive(Debug, Clone)]
pub struct Watchdog {
    config: WatchdogConfig,
    pending: Vec<Experience>,
    processed: usize,
    added: usize,
}

impl Watchdog {
    pub fn new(config: WatchdogConfig) -> Self {
        Watchdog {
            config,
            pending: Vec::new(),
            processed: 0,
            added: 0,
        }
    }

    pub fn added(&self) -> usize {
        self.added
    }

    /// Records one processed page. Returns the next graph generation when
    /// this page completes an interval and something was added.
    pub fn observe(&mut self, graph: &TGraph, page: Option<Experience>) -> Option<TGraph> {
        if !self.config.enabled {
            return None;
        }
        self.processed += 1;
        if let Some(p) = page.filter(|p| p.on_topic) {
            self.pending.push(p);
        }
        if !self.processed.is_multiple_of(self.config.interval.max(1)) {
            return None;
        }
        let before = graph.nodes().len();
        let next = watchdog_update(graph, &self.pending, &self.config, self.added);
        self.pending.clear();
        let grown = next.nodes().len() - before;
        self.added += grown;
        (grown > 0).then_some(next)
    }
}
