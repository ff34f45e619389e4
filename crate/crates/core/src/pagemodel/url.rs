use url::Url;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum UrlError {
    #[error("base URL {0:?} is not absolute")]
    BadBase(String),
    #[error("cannot resolve {raw:?}: {reason}")]
    Unparsable { raw: String, reason: String },
}

/// Resolves `raw` against `base` and canonicalizes the result: lower-case
/// scheme and host, default port removed, dot-segments collapsed, fragment
/// dropped.
pub fn normalize_url(raw: &str, base: &str) -> Result<String, UrlError> {
    let base = Url::parse(base.trim()).map_err(|_| UrlError::BadBase(base.to_string()))?;
    normalize_against(raw, &base)
}

pub(crate) fn normalize_against(raw: &str, base: &Url) -> Result<String, UrlError> {
    let mut url = base.join(raw.trim()).map_err(|e| UrlError::Unparsable {
        raw: raw.to_string(),
        reason: e.to_string(),
    })?;
    url.set_fragment(None);
    Ok(url.into())
}

pub fn is_http(url: &str) -> bool {
    url.starts_with("http://") || url.starts_with("https://")
}
