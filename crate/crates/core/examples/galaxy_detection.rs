//! Topic prediction for one link: plot the Dewey codes around it, find the
//! galaxy, and match it against the English-language profile.

use focuscrawl::pagemodel::{extract_context, parse_document};
use focuscrawl::taxonomy::{Taxonomy, TopicProfile};
use focuscrawl::topic::{classify_link, detect_galaxy, plot_points, DetectorParams};

const PAGE: &str = r#"<html><head><title>Writing well</title></head><body>
<p>Good essays need a rich vocabulary, correct syntax and careful punctuation.
   Our <a href="/guide">English grammar guide</a> covers every verb tense.</p>
<ul>
  <li><a href="/scores">Football scores</a> from the stadium</li>
  <li><a href="/recipes">Bread recipes</a> for the kitchen</li>
</ul>
</body></html>"#;

fn main() {
    let taxonomy = Taxonomy::bundled();
    let profile = TopicProfile::english_language(3);
    let params = DetectorParams::default();
    let doc = parse_document(PAGE.as_bytes(), "http://example.org/");
    for link in &doc.links {
        let ctx = extract_context(&doc, link, 50).expect("link is on the page");
        let cloud = plot_points(&ctx, &taxonomy, &params);
        let galaxy = detect_galaxy(&cloud, &params);
        let decision = classify_link(&ctx, &taxonomy, &profile, &params);
        println!("{}", link.target);
        println!("  anchor   {:?}", ctx.anchor_text());
        for p in &cloud.points {
            println!("  point    {} at {}{}", p.code, p.position, if p.is_anchor { " (anchor)" } else { "" });
        }
        if let Some(g) = galaxy {
            println!("  galaxy   {} score {:.3} support {}", g.prefix, g.score, g.support);
        }
        println!("  on-topic {} {:?}", decision.on_topic, decision.matched_code.map(|c| c.to_string()));
    }
}
