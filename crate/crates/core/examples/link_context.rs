//! Parses an HTML file (or a built-in sample) and prints each link with the
//! text segment used to judge it.
//!
//!     cargo run --example link_context -- page.html http://example.org/

use focuscrawl::pagemodel::{extract_context, parse_document, DEFAULT_CONTEXT_WINDOW};

const SAMPLE: &str = r#"<html><head><title>Sample</title></head><body>
<p>Read the <a href="intro.html#top">introduction</a> first.</p>
<ul><li><a href="a.html">First</a> item</li><li><a href="b.html">Second</a> item</li></ul>
<div>Loose text <a href="/loose">outside</a> any paragraph.</div>
<a href="mailto:me@example.org">mail</a> <a rel="nofollow" href="/skip">skipped</a>
</body></html>"#;

fn main() -> std::io::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let html = match args.first() {
        Some(path) => std::fs::read(path)?,
        None => SAMPLE.as_bytes().to_vec(),
    };
    let base = args.get(1).map_or("http://example.org/docs/", String::as_str);
    let doc = parse_document(&html, base);
    println!("title: {:?}, {} body tokens, {} links dropped", doc.title, doc.body_tokens.len(), doc.dropped_links);
    for link in &doc.links {
        let ctx = extract_context(&doc, link, DEFAULT_CONTEXT_WINDOW).expect("own link");
        println!("{} [{:?}]", link.target, ctx.boundary_kind);
        println!("    {}", ctx.text());
    }
    Ok(())
}
