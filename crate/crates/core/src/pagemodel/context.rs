use serde::{Deserialize, Serialize};

use super::{ContainerKind, Link, PageDocument, SegmentKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryKind {
    Paragraph,
    ListItems,
    Document,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextToken {
    pub position: usize,
    pub text: String,
    pub is_anchor: bool,
}

/// The tokens between the break points around one unvisited link.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkContext {
    pub link: Link,
    pub tokens: Vec<ContextToken>,
    pub boundary_kind: BoundaryKind,
}

impl LinkContext {
    pub fn anchor_text(&self) -> String {
        self.link.anchor_tokens.join(" ")
    }

    pub fn text(&self) -> String {
        let words: Vec<&str> = self.tokens.iter().map(|t| t.text.as_str()).collect();
        words.join(" ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("link to {0} is not part of the document")]
pub struct LinkNotInDocument(pub String);

/// Collects the context of `link`: its paragraph, its whole list, or a
/// window of `window` tokens on each side when it sits in neither.
pub fn extract_context(
    doc: &PageDocument,
    link: &Link,
    window: usize,
) -> Result<LinkContext, LinkNotInDocument> {
    if !doc.links.contains(link) {
        return Err(LinkNotInDocument(link.target.clone()));
    }
    let anchor_len = link.anchor_tokens.len();
    let (tokens, boundary_kind) = match link.segment.map(|s| &doc.segments[s]) {
        Some(segment) => {
            let anchor = link.position..link.position + anchor_len;
            let tokens = segment
                .tokens
                .iter()
                .enumerate()
                .map(|(pos, &idx)| ContextToken {
                    position: pos,
                    text: doc.body_tokens[idx].clone(),
                    is_anchor: anchor.contains(&pos),
                })
                .collect();
            let kind = match segment.kind {
                SegmentKind::Paragraph => BoundaryKind::Paragraph,
                SegmentKind::List => BoundaryKind::ListItems,
            };
            (tokens, kind)
        }
        None => {
            debug_assert_eq!(link.container, ContainerKind::Other);
            let start = link.body_offset.saturating_sub(window);
            let end = (link.body_offset + anchor_len + window).min(doc.body_tokens.len());
            let anchor = link.body_offset..link.body_offset + anchor_len;
            let tokens = (start..end)
                .map(|idx| ContextToken {
                    position: idx,
                    text: doc.body_tokens[idx].clone(),
                    is_anchor: anchor.contains(&idx),
                })
                .collect();
            (tokens, BoundaryKind::Document)
        }
    };
    Ok(LinkContext {
        link: link.clone(),
        tokens,
        boundary_kind,
    })
}
