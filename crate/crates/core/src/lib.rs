//! Focused web crawling: Dewey-code topic detection for pages and links,
//! T-Graph link prioritization, a corpus or live crawl engine, and an
//! evaluation harness.

pub mod crawl;
mod error;
pub mod eval;
pub mod pagemodel;
pub mod taxonomy;
pub mod text;
pub mod tgraph;
pub mod topic;

pub use error::Error;
