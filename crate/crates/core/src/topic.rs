//! Topical focus prediction from Dewey codes.
//!
//! Every taxonomy hit in a link's context becomes one or more plotted
//! points. Points are aggregated over code prefixes; the prefix with the
//! heaviest length-scaled mass is the galaxy, and its relation to the
//! topic profile decides whether the link (or page) is on topic.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::pagemodel::{LinkContext, PageDocument};
use crate::taxonomy::{DNumber, Taxonomy, TopicProfile};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorParams {
    pub anchor_impact: f64,
    pub max_dnumber_length: usize,
}

impl Default for DetectorParams {
    fn default() -> Self {
        DetectorParams {
            anchor_impact: 1.40,
            max_dnumber_length: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlotPoint {
    pub position: usize,
    /// Truncated to `max_dnumber_length`.
    pub code: DNumber,
    pub full_len: usize,
    pub is_anchor: bool,
}

impl PlotPoint {
    pub fn weight(&self, params: &DetectorParams) -> f64 {
        let anchor = if self.is_anchor { params.anchor_impact } else { 1.0 };
        anchor * (self.full_len as f64 / params.max_dnumber_length as f64)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PointCloud {
    pub points: Vec<PlotPoint>,
    pub total_weight: f64,
}

impl PointCloud {
    pub fn from_points(points: impl IntoIterator<Item = PlotPoint>, params: &DetectorParams) -> Self {
        let mut cloud = PointCloud::default();
        for p in points {
            cloud.push(p, params);
        }
        cloud
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn push(&mut self, point: PlotPoint, params: &DetectorParams) {
        self.total_weight += point.weight(params);
        self.points.push(point);
    }

    fn extend_from_tokens<S: AsRef<str>>(
        &mut self,
        tokens: &[S],
        anchor_flags: impl Fn(usize) -> bool,
        offset: usize,
        taxonomy: &Taxonomy,
        params: &DetectorParams,
    ) {
        for hit in taxonomy.lookup_terms(tokens) {
            let is_anchor = anchor_flags(hit.position);
            for code in &hit.codes {
                self.push(
                    PlotPoint {
                        position: offset + hit.position,
                        code: code.truncate(params.max_dnumber_length),
                        full_len: code.precision(params.max_dnumber_length),
                        is_anchor,
                    },
                    params,
                );
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GalaxyResult {
    pub prefix: String,
    pub score: f64,
    pub support: usize,
    pub anchor_support: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicDecision {
    pub on_topic: bool,
    pub galaxy: Option<GalaxyResult>,
    pub matched_code: Option<DNumber>,
}

impl TopicDecision {
    pub fn off_topic() -> Self {
        TopicDecision {
            on_topic: false,
            galaxy: None,
            matched_code: None,
        }
    }
}

/// Plots one point per (hit, code) in the context.
pub fn plot_points(ctx: &LinkContext, taxonomy: &Taxonomy, params: &DetectorParams) -> PointCloud {
    let words: Vec<&str> = ctx.tokens.iter().map(|t| t.text.as_str()).collect();
    let mut cloud = PointCloud::default();
    for hit in taxonomy.lookup_terms(&words) {
        let token = &ctx.tokens[hit.position];
        for code in &hit.codes {
            cloud.push(
                PlotPoint {
                    position: token.position,
                    code: code.truncate(params.max_dnumber_length),
                    full_len: code.precision(params.max_dnumber_length),
                    is_anchor: token.is_anchor,
                },
                params,
            );
        }
    }
    cloud
}

#[derive(Default)]
struct PrefixMass {
    /// Summed `full_len` of anchor and plain points, kept as integers so
    /// equal masses compare equal.
    anchor_len: usize,
    plain_len: usize,
    support: usize,
    anchor_support: usize,
}

/// Finds the code prefix with the highest `mass * len / max_len`.
///
/// Ties prefer the longer prefix, then more anchor points, then the
/// lexicographically smaller prefix.
pub fn detect_galaxy(cloud: &PointCloud, params: &DetectorParams) -> Option<GalaxyResult> {
    let max_len = params.max_dnumber_length;
    let mut masses: HashMap<&str, PrefixMass> = HashMap::new();
    for point in &cloud.points {
        let code = point.code.as_str();
        for len in 1..=code.len().min(max_len) {
            let entry = masses.entry(&code[..len]).or_default();
            if point.is_anchor {
                entry.anchor_len += point.full_len;
            } else {
                entry.plain_len += point.full_len;
            }
            entry.support += 1;
            entry.anchor_support += usize::from(point.is_anchor);
        }
    }
    masses
        .into_iter()
        .map(|(prefix, m)| GalaxyResult {
            prefix: prefix.to_string(),
            score: prefix_score(m.anchor_len, m.plain_len, prefix.len(), params),
            support: m.support,
            anchor_support: m.anchor_support,
        })
        .max_by(galaxy_order)
}

/// `mass * len / max_len` where the mass comes from summed `full_len` of
/// anchor and plain points. Integer products are formed before the one
/// float multiply so that exactly tied prefixes get identical scores.
pub fn prefix_score(anchor_len: usize, plain_len: usize, len: usize, params: &DetectorParams) -> f64 {
    let m = params.max_dnumber_length;
    (params.anchor_impact * (anchor_len * len) as f64 + (plain_len * len) as f64) / (m * m) as f64
}

/// Total order used to pick the galaxy; the greatest element wins.
pub fn galaxy_order(a: &GalaxyResult, b: &GalaxyResult) -> std::cmp::Ordering {
    a.score
        .total_cmp(&b.score)
        .then(a.prefix.len().cmp(&b.prefix.len()))
        .then(a.anchor_support.cmp(&b.anchor_support))
        .then_with(|| b.prefix.cmp(&a.prefix))
}

/// The profile code in a prefix relation with `prefix`, preferring the
/// longest shared prefix and then the smallest code.
pub fn match_profile(prefix: &str, profile: &TopicProfile) -> Option<DNumber> {
    profile
        .codes()
        .iter()
        .filter(|code| code.as_str().starts_with(prefix) || prefix.starts_with(code.as_str()))
        .map(|code| (code.as_str().len().min(prefix.len()), code))
        .min_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(b.1)))
        .map(|(_, code)| code.clone())
}

fn decide(cloud: &PointCloud, profile: &TopicProfile, params: &DetectorParams) -> TopicDecision {
    let Some(galaxy) = detect_galaxy(cloud, params) else {
        return TopicDecision::off_topic();
    };
    let matched_code = match_profile(&galaxy.prefix, profile);
    TopicDecision {
        on_topic: matched_code.is_some(),
        galaxy: Some(galaxy),
        matched_code,
    }
}

pub fn classify_link(
    ctx: &LinkContext,
    taxonomy: &Taxonomy,
    profile: &TopicProfile,
    params: &DetectorParams,
) -> TopicDecision {
    decide(&plot_points(ctx, taxonomy, params), profile, params)
}

/// Whole-page cloud: title tokens count as anchor text, body tokens as
/// surrounding text.
pub fn page_cloud(doc: &PageDocument, taxonomy: &Taxonomy, params: &DetectorParams) -> PointCloud {
    let title = doc.title_tokens();
    let mut cloud = PointCloud::default();
    cloud.extend_from_tokens(&title, |_| true, 0, taxonomy, params);
    cloud.extend_from_tokens(&doc.body_tokens, |_| false, title.len(), taxonomy, params);
    cloud
}

pub fn classify_page(
    doc: &PageDocument,
    taxonomy: &Taxonomy,
    profile: &TopicProfile,
    params: &DetectorParams,
) -> TopicDecision {
    decide(&page_cloud(doc, taxonomy, params), profile, params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pagemodel::{extract_context, parse_document};

    const TAXONOMY: &str = "\
420\tEnglish & Old English\tenglish,old english
425\tEnglish grammar\tgrammar,syntax
428\tStandard English usage\tusage
391\tCostume\tclothing
155.95\tClothing psychology\tclothing
746.92\tCostume design\tclothing
796\tSports\tfootball,athletics,sport
";

    fn setup() -> (Taxonomy, TopicProfile, DetectorParams) {
        (
            Taxonomy::parse(TAXONOMY).unwrap(),
            TopicProfile::english_language(3),
            DetectorParams::default(),
        )
    }

    fn point(code: &str, is_anchor: bool) -> PlotPoint {
        PlotPoint {
            position: 0,
            code: code.parse().unwrap(),
            full_len: code.len(),
            is_anchor,
        }
    }

    fn cloud(points: Vec<PlotPoint>) -> PointCloud {
        PointCloud::from_points(points, &DetectorParams::default())
    }

    fn first_link_context(html: &str) -> LinkContext {
        let doc = parse_document(html.as_bytes(), "http://x.org/");
        extract_context(&doc, &doc.links[0], 50).unwrap()
    }

    #[test]
    fn anchor_point_weight() {
        let (tax, _, params) = setup();
        let ctx = first_link_context(r#"<p><a href="/e">english</a></p>"#);
        let c = plot_points(&ctx, &tax, &params);
        assert_eq!(c.points.len(), 1);
        assert!((c.total_weight - 1.4).abs() < 1e-12);
    }

    #[test]
    fn clothing_plots_three_points() {
        let (tax, _, params) = setup();
        let ctx = first_link_context(r#"<p>clothing <a href="/e">here</a></p>"#);
        let c = plot_points(&ctx, &tax, &params);
        let codes: Vec<_> = c.points.iter().map(|p| p.code.to_string()).collect();
        assert_eq!(codes, ["155", "391", "746"]);
        assert!(c.points.iter().all(|p| (p.weight(&params) - 1.0).abs() < 1e-12));
    }

    #[test]
    fn empty_cloud_has_no_galaxy() {
        let params = DetectorParams::default();
        let c = PointCloud::default();
        assert_eq!(c.total_weight, 0.0);
        assert!(detect_galaxy(&c, &params).is_none());
    }

    #[test]
    fn galaxy_worked_example() {
        let params = DetectorParams::default();
        let c = cloud(vec![
            point("420", true),
            point("420", false),
            point("425", false),
            point("391", false),
        ]);
        let g = detect_galaxy(&c, &params).unwrap();
        assert_eq!(g.prefix, "420");
        assert!((g.score - 2.4).abs() < 1e-12);
        assert_eq!((g.support, g.anchor_support), (2, 1));
    }

    #[test]
    fn single_point_galaxy() {
        let g = detect_galaxy(&cloud(vec![point("391", false)]), &DetectorParams::default()).unwrap();
        assert_eq!(g.prefix, "391");
        assert!((g.score - 1.0).abs() < 1e-12);
        assert_eq!(g.support, 1);
    }

    #[test]
    fn profile_matching() {
        let profile = TopicProfile::english_language(3);
        assert_eq!(match_profile("420", &profile).unwrap().as_str(), "420");
        assert!(match_profile("391", &profile).is_none());
        assert_eq!(match_profile("42", &profile).unwrap().as_str(), "420");
        assert_eq!(match_profile("4", &profile).unwrap().as_str(), "400");
        let narrow = TopicProfile::parse("4\n42\n", 3).unwrap();
        assert_eq!(match_profile("425", &narrow).unwrap().as_str(), "42");
    }

    #[test]
    fn link_classification() {
        let (tax, profile, params) = setup();
        let ctx = first_link_context(r#"<p>english grammar <a href="/e">english</a></p>"#);
        let d = classify_link(&ctx, &tax, &profile, &params);
        assert!(d.on_topic);
        assert_eq!(d.galaxy.unwrap().prefix, "420");
        assert_eq!(d.matched_code.unwrap().as_str(), "420");

        let ctx = first_link_context(r#"<p>clothing clothing <a href="/c">costume</a></p>"#);
        let d = classify_link(&ctx, &tax, &profile, &params);
        assert!(!d.on_topic);
        assert!(d.matched_code.is_none());
    }

    #[test]
    fn page_classification() {
        let (tax, profile, params) = setup();
        let doc = parse_document(
            b"<title>Grammar</title><p>english grammar usage english syntax</p>",
            "http://x.org/",
        );
        assert!(classify_page(&doc, &tax, &profile, &params).on_topic);

        let doc = parse_document(b"<p>nothing to see</p>", "http://x.org/");
        let d = classify_page(&doc, &tax, &profile, &params);
        assert!(!d.on_topic && d.galaxy.is_none());

        let mut body = String::from("<p>english ");
        body.push_str(&"football ".repeat(10));
        body.push_str("</p>");
        let doc = parse_document(body.as_bytes(), "http://x.org/");
        let d = classify_page(&doc, &tax, &profile, &params);
        assert!(!d.on_topic);
        assert_eq!(d.galaxy.unwrap().prefix, "796");
    }
}
