//! Email canonicalization and organization lookup.
//!
//! Developers are identified by canonical email address. An [`AffiliationTable`]
//! maps email-domain suffixes to organization names; anything unmatched falls
//! back to [`OTHER`].

use thiserror::Error;

/// Fallback organization for emails no rule matches.
pub const OTHER: &str = "other";

/// Errors from [`canonicalize_email`].
#[derive(Debug, Error, PartialEq, Eq)]
pub enum EmailError {
    #[error("no '@' in email {0:?}")]
    MissingAt(String),
    #[error("more than one '@' in email {0:?}")]
    MultipleAt(String),
    #[error("empty local part in email {0:?}")]
    EmptyLocal(String),
    #[error("empty domain in email {0:?}")]
    EmptyDomain(String),
    #[error("whitespace or brackets inside email {0:?}")]
    InnerGarbage(String),
}

/// Errors from parsing an affiliation table file.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum AffiliationError {
    #[error("line {line}: expected \"pattern = Organization\", got {text:?}")]
    BadLine { line: usize, text: String },
    #[error("line {line}: duplicate pattern {pattern:?}")]
    DuplicatePattern { line: usize, pattern: String },
    #[error("line {line}: empty organization name")]
    EmptyOrganization { line: usize },
    #[error("line {line}: empty pattern")]
    EmptyPattern { line: usize },
    #[error("line {line}: pattern {pattern:?} must not contain '@'")]
    PatternHasAt { line: usize, pattern: String },
}

/// Reduce a raw author string to a canonical email address.
///
/// Accepts bare addresses and `Display Name <addr>` forms. The result is
/// trimmed, lowercased, and guaranteed to contain exactly one `@` with a
/// non-empty local part and domain.
pub fn canonicalize_email(raw: &str) -> Result<String, EmailError> {
    let trimmed = raw.trim();
    let inner = match (trimmed.rfind('<'), trimmed.rfind('>')) {
        (Some(lt), Some(gt)) if lt < gt => &trimmed[lt + 1..gt],
        _ => trimmed,
    };
    let email = inner.trim().to_lowercase();
    let mut parts = email.splitn(3, '@');
    let local = parts.next().unwrap_or("");
    let domain = match parts.next() {
        Some(d) => d,
        None => return Err(EmailError::MissingAt(raw.to_string())),
    };
    if parts.next().is_some() {
        return Err(EmailError::MultipleAt(raw.to_string()));
    }
    if local.is_empty() {
        return Err(EmailError::EmptyLocal(raw.to_string()));
    }
    if domain.is_empty() {
        return Err(EmailError::EmptyDomain(raw.to_string()));
    }
    if email
        .chars()
        .any(|c| c.is_whitespace() || c == '<' || c == '>' || c.is_control())
    {
        return Err(EmailError::InnerGarbage(raw.to_string()));
    }
    Ok(email)
}

/// A developer node: dense id, canonical email, and resolved organization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Developer {
    /// Dense index, unique within one graph.
    pub id: usize,
    /// Canonical email address.
    pub email: String,
    /// Organization name from the affiliation table, or [`OTHER`].
    pub affiliation: String,
}

/// Ordered mapping from email-domain suffix patterns to organization names.
///
/// The first matching rule wins; a pattern matches when it equals the email's
/// domain or is a dot-boundary suffix of it (`google.com` matches
/// `mail.google.com` but not `notgoogle.com`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffiliationTable {
    rules: Vec<(String, String)>,
}

impl AffiliationTable {
    /// Table with no rules: every email resolves to [`OTHER`].
    pub fn empty() -> Self {
        AffiliationTable { rules: Vec::new() }
    }

    /// The built-in table for the ten most active WebKit organizations,
    /// keyed by their public email domains.
    pub fn default_preset() -> Self {
        let rules = [
            ("apple.com", "Apple"),
            ("google.com", "Google"),
            ("chromium.org", "Google"),
            ("nokia.com", "Nokia"),
            ("rim.com", "RIM"),
            ("blackberry.com", "RIM"),
            ("igalia.com", "Igalia"),
            ("intel.com", "Intel"),
            ("samsung.com", "Samsung"),
            ("inf.u-szeged.hu", "Univ. Szeged"),
            ("adobe.com", "Adobe"),
            ("torchmobile.com", "Torch Mobile"),
        ];
        AffiliationTable {
            rules: rules
                .iter()
                .map(|(p, o)| (p.to_string(), o.to_string()))
                .collect(),
        }
    }

    /// Parse the `pattern = Organization` file format. `#` starts a comment;
    /// blank lines are skipped; file order is the match order.
    pub fn parse(text: &str) -> Result<Self, AffiliationError> {
        let mut rules: Vec<(String, String)> = Vec::new();
        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw_line.find('#') {
                Some(pos) => &raw_line[..pos],
                None => raw_line,
            };
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (pattern, org) = line.split_once('=').ok_or(AffiliationError::BadLine {
                line: line_no,
                text: line.to_string(),
            })?;
            let pattern = pattern.trim().to_lowercase();
            let org = org.trim().to_string();
            if pattern.is_empty() {
                return Err(AffiliationError::EmptyPattern { line: line_no });
            }
            if pattern.contains('@') {
                return Err(AffiliationError::PatternHasAt {
                    line: line_no,
                    pattern,
                });
            }
            if org.is_empty() {
                return Err(AffiliationError::EmptyOrganization { line: line_no });
            }
            if rules.iter().any(|(p, _)| *p == pattern) {
                return Err(AffiliationError::DuplicatePattern {
                    line: line_no,
                    pattern,
                });
            }
            rules.push((pattern, org));
        }
        Ok(AffiliationTable { rules })
    }

    /// Organization for a canonical email; total, never fails.
    pub fn resolve(&self, email: &str) -> &str {
        let domain = match email.rsplit_once('@') {
            Some((_, d)) => d,
            None => email,
        };
        for (pattern, org) in &self.rules {
            if Self::suffix_match(domain, pattern) {
                return org;
            }
        }
        OTHER
    }

    /// The rules in match order.
    pub fn rules(&self) -> &[(String, String)] {
        &self.rules
    }

    fn suffix_match(domain: &str, pattern: &str) -> bool {
        if domain == pattern {
            return true;
        }
        domain.len() > pattern.len()
            && domain.ends_with(pattern)
            && domain.as_bytes()[domain.len() - pattern.len() - 1] == b'.'
    }
}
