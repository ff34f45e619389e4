//! Minimal robots.txt support: `User-agent` groups with `Allow`/`Disallow`
//! rules, longest match wins, `Allow` wins ties. `*` and a trailing `$` are
//! understood in paths.

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RobotsRules {
    rules: Vec<(bool, String)>,
}

impl RobotsRules {
    pub fn allow_all() -> Self {
        RobotsRules::default()
    }

    /// Rules that apply to `agent`: its own group if one names it,
    /// otherwise the `*` group.
    pub fn parse(text: &str, agent: &str) -> Self {
        let agent = agent.to_ascii_lowercase();
        let mut specific: Option<Vec<(bool, String)>> = None;
        let mut wildcard: Option<Vec<(bool, String)>> = None;

        let mut group_agents: Vec<String> = Vec::new();
        let mut group_rules: Vec<(bool, String)> = Vec::new();
        let mut in_rules = false;

        let mut close = |agents: &[String], rules: &[(bool, String)]| {
            for a in agents {
                if a == "*" {
                    wildcard.get_or_insert_with(Vec::new).extend(rules.iter().cloned());
                } else if agent.contains(a.as_str()) {
                    specific.get_or_insert_with(Vec::new).extend(rules.iter().cloned());
                }
            }
        };

        for raw in text.lines() {
            let line = raw.split('#').next().unwrap_or("").trim();
            let Some((key, value)) = line.split_once(':') else { continue };
            let key = key.trim().to_ascii_lowercase();
            let value = value.trim();
            match key.as_str() {
                "user-agent" => {
                    if in_rules {
                        close(&group_agents, &group_rules);
                        group_agents.clear();
                        group_rules.clear();
                        in_rules = false;
                    }
                    group_agents.push(value.to_ascii_lowercase());
                }
                "allow" | "disallow" => {
                    in_rules = true;
                    if !value.is_empty() {
                        group_rules.push((key == "allow", value.to_string()));
                    }
                }
                _ => {}
            }
        }
        close(&group_agents, &group_rules);
        RobotsRules {
            rules: specific.or(wildcard).unwrap_or_default(),
        }
    }

    /// Whether `path` (path plus query) may be fetched.
    pub fn allows(&self, path: &str) -> bool {
        let mut best: Option<(usize, bool)> = None;
        for (allow, pattern) in &self.rules {
            if matches(pattern, path) {
                let len = pattern.len();
                best = match best {
                    Some((l, a)) if l > len || (l == len && a) => Some((l, a)),
                    _ => Some((len, *allow)),
                };
            }
        }
        best.is_none_or(|(_, allow)| allow)
    }
}

fn matches(pattern: &str, path: &str) -> bool {
    let pattern = match pattern.strip_suffix('$') {
        Some(p) => p.to_string(),
        None => format!("{pattern}*"),
    };
    glob(pattern.as_bytes(), path.as_bytes())
}

/// Whole-string match where `*` stands for any run of bytes.
fn glob(p: &[u8], s: &[u8]) -> bool {
    let (mut pi, mut si) = (0, 0);
    let mut star: Option<(usize, usize)> = None;
    while si < s.len() {
        if pi < p.len() && p[pi] == b'*' {
            star = Some((pi, si));
            pi += 1;
        } else if pi < p.len() && p[pi] == s[si] {
            pi += 1;
            si += 1;
        } else if let Some((sp, ss)) = star {
            pi = sp + 1;
            si = ss + 1;
            star = Some((sp, ss + 1));
        } else {
            return false;
        }
    }
    p[pi..].iter().all(|&c| c == b'*')
}

#[cfg(test)]
mod tests {
    use super::*;

    const ROBOTS: &str = "\
User-agent: *
Disallow: /private/
Allow: /private/open
Disallow: /*.pdf$

User-agent: focuscrawl
Disallow: /nobots
";

    #[test]
    fn wildcard_group() {
        let r = RobotsRules::parse(ROBOTS, "othercrawler/1.0");
        assert!(r.allows("/"));
        assert!(!r.allows("/private/x"));
        assert!(r.allows("/private/open/page"));
        assert!(!r.allows("/doc/file.pdf"));
        assert!(r.allows("/doc/file.pdf?x=1"));
    }

    #[test]
    fn specific_group_replaces_wildcard() {
        let r = RobotsRules::parse(ROBOTS, "focuscrawl/0.1");
        assert!(r.allows("/private/x"));
        assert!(!r.allows("/nobots/a"));
    }

    #[test]
    fn empty_disallow_allows_everything() {
        let r = RobotsRules::parse("User-agent: *\nDisallow:\n", "x");
        assert!(r.allows("/anything"));
        assert!(RobotsRules::allow_all().allows("/"));
    }
}
