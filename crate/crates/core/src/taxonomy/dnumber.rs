use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// A Dewey Decimal code such as `420` or `155.95`.
///
/// Always holds at least one digit, with at most one decimal point that is
/// followed by at least one digit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct DNumber(String);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid D-number {0:?}")]
pub struct InvalidDNumber(pub String);

impl DNumber {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Digits before the decimal point.
    pub fn integer_digits(&self) -> &str {
        self.0.split('.').next().unwrap_or("")
    }

    /// Drops the decimal point and everything after it, then keeps the
    /// first `max_len` digits.
    pub fn truncate(&self, max_len: usize) -> DNumber {
        let max_len = max_len.max(1);
        let head = self.integer_digits();
        DNumber(head.chars().take(max_len).collect())
    }

    /// Digit count of the truncated form, i.e. how precise the code stays
    /// after truncation to `max_len`.
    pub fn precision(&self, max_len: usize) -> usize {
        self.integer_digits().len().min(max_len.max(1))
    }

    pub fn is_prefix_of(&self, other: &DNumber) -> bool {
        other.0.starts_with(&self.0)
    }
}

impl FromStr for DNumber {
    type Err = InvalidDNumber;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let mut parts = s.splitn(2, '.');
        let head = parts.next().unwrap_or("");
        let valid_part = |p: &str| !p.is_empty() && p.bytes().all(|b| b.is_ascii_digit());
        let ok = valid_part(head) && parts.next().is_none_or(valid_part);
        if ok {
            Ok(DNumber(s.to_string()))
        } else {
            Err(InvalidDNumber(s.to_string()))
        }
    }
}

impl TryFrom<String> for DNumber {
    type Error = InvalidDNumber;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        value.parse()
    }
}

impl From<DNumber> for String {
    fn from(d: DNumber) -> String {
        d.0
    }
}

impl fmt::Display for DNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Truncates a code to its first `max_len` integer digits.
pub fn truncate_code(code: &DNumber, max_len: usize) -> DNumber {
    code.truncate(max_len)
}
