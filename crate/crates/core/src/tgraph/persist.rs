use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{TGraph, TGraphError, TGraphNode};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct GraphFile {
    format_version: u32,
    depth: usize,
    nodes: Vec<NodeRecord>,
    edges: Vec<[usize; 2]>,
}

#[derive(Serialize, Deserialize)]
struct NodeRecord {
    id: usize,
    level: usize,
    url: String,
    anchor_text: String,
    surrounding_text: String,
    title_text: String,
    body_text: String,
}

impl TGraph {
    pub fn to_json(&self) -> String {
        let file = GraphFile {
            format_version: FORMAT_VERSION,
            depth: self.depth,
            nodes: self
                .nodes
                .iter()
                .map(|n| NodeRecord {
                    id: n.id,
                    level: n.level,
                    url: n.url.clone(),
                    anchor_text: n.anchor_text.clone(),
                    surrounding_text: n.surrounding_text.clone(),
                    title_text: n.title_text.clone(),
                    body_text: n.body_text.clone(),
                })
                .collect(),
            edges: self.edges.iter().map(|&(c, p)| [c, p]).collect(),
        };
        serde_json::to_string_pretty(&file).expect("graph serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, TGraphError> {
        let file: GraphFile =
            serde_json::from_str(text).map_err(|e| TGraphError::Malformed(e.to_string()))?;
        if file.format_version != FORMAT_VERSION {
            return Err(TGraphError::Version {
                found: file.format_version,
                expected: FORMAT_VERSION,
            });
        }
        let nodes = file
            .nodes
            .into_iter()
            .map(|n| {
                TGraphNode::new(
                    n.id,
                    n.level,
                    n.url,
                    n.anchor_text,
                    n.surrounding_text,
                    n.title_text,
                    n.body_text,
                )
            })
            .collect();
        let edges = file.edges.into_iter().map(|[c, p]| (c, p)).collect();
        TGraph::from_parts(file.depth, nodes, edges)
    }
}

pub fn save_tgraph(graph: &TGraph, path: impl AsRef<Path>) -> Result<(), TGraphError> {
    let path = path.as_ref();
    std::fs::write(path, graph.to_json()).map_err(|e| TGraphError::io(path, e))
}

pub fn load_tgraph(path: impl AsRef<Path>) -> Result<TGraph, TGraphError> {
    let path = path.as_ref();
    if path.as_os_str().is_empty() {
        return Err(TGraphError::NotFound(String::new()));
    }
    let text = std::fs::read_to_string(path).map_err(|e| TGraphError::io(path, e))?;
    TGraph::from_json(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> TGraph {
        let nodes = vec![
            TGraphNode::new(0, 0, "http://x.org/t", "grammar", "learn grammar", "Target", "english grammar"),
            TGraphNode::new(1, 1, "http://x.org/p", "target", "see target", "Parent", "body \"quoted\"\ttab"),
        ];
        TGraph::from_parts(3, nodes, vec![(0, 1)]).unwrap()
    }

    #[test]
    fn round_trip() {
        let g = sample();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.json");
        save_tgraph(&g, &path).unwrap();
        assert_eq!(load_tgraph(&path).unwrap(), g);
    }

    #[test]
    fn truncated_file_fails() {
        let json = sample().to_json();
        let cut = &json[..json.len() / 2];
        assert!(matches!(TGraph::from_json(cut), Err(TGraphError::Malformed(_))));
    }

    #[test]
    fn version_mismatch_fails() {
        let json = sample().to_json().replace("\"format_version\": 1", "\"format_version\": 9");
        assert!(matches!(TGraph::from_json(&json), Err(TGraphError::Version { found: 9, .. })));
    }

    #[test]
    fn missing_paths() {
        let err = load_tgraph("").unwrap_err();
        assert!(err.to_string().starts_with("no such file"));
        let err = load_tgraph("/definitely/not/here.json").unwrap_err();
        assert!(matches!(err, TGraphError::NotFound(_)));
    }
}
