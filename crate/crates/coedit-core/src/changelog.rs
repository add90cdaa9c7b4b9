//! Parsers for GNU/WebKit-style ChangeLog files and the canonical
//! tab-separated commit log.
//!
//! Both parsers produce [`Contribution`] records: one developer email, one
//! UTC timestamp, one repository-relative file path. The ChangeLog grammar:
//!
//! ```text
//! 2013-04-03  Alice Dev  <alice@apple.com>
//!
//!         Short description, bug links, "Reviewed by ..." lines.
//!
//!         * Source/WebCore/page/Frame.cpp: note
//!         * Source/WebCore/page/Frame.h (WebCore::Frame::create):
//! ```
//!
//! An entry header is a column-0 line `YYYY-MM-DD  NAME  <EMAIL>`. Changed
//! files are the subsequent indented lines beginning with `*`; the path token
//! runs up to (not including) the trailing `:` or the first whitespace after
//! the path, so `(function)` annotations and notes are dropped. Other body
//! lines are ignored.

use std::collections::HashSet;
use std::hash::{Hash, Hasher};
use std::io::{self, Read};

use chrono::{DateTime, NaiveDate, NaiveDateTime, TimeZone, Utc};
use thiserror::Error;

use crate::affiliation::canonicalize_email;

/// Earliest representable contribution instant (inclusive).
pub fn range_start() -> DateTime<Utc> {
    Utc.with_ymd_and_hms(1970, 1, 1, 0, 0, 0).unwrap()
}

/// Upper bound on contribution instants (exclusive).
pub fn range_end() -> DateTime<Utc> {
    Utc.with_ymd_and_hms(2100, 1, 1, 0, 0, 0).unwrap()
}

/// True when `t` lies within the representable range.
pub fn timestamp_in_range(t: DateTime<Utc>) -> bool {
    t >= range_start() && t < range_end()
}

/// One (developer email, timestamp, file path) change event.
///
/// Equality and hashing use only that identity triple; `name` and
/// `source_line` are provenance carried for diagnostics and display.
#[derive(Debug, Clone)]
pub struct Contribution {
    /// Canonical email address (lowercase, exactly one `@`).
    pub email: String,
    /// Display name from the log header, when present.
    pub name: Option<String>,
    /// UTC instant at second resolution; date-only inputs resolve to midnight.
    pub timestamp: DateTime<Utc>,
    /// Repository-relative path of the changed file.
    pub file_path: String,
    /// 1-based line of the originating input, for diagnostics.
    pub source_line: usize,
}

/// Why a [`Contribution`] could not be constructed.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ContributionError {
    #[error("invalid email {0:?}")]
    InvalidEmail(String),
    #[error("invalid file path {0:?}")]
    InvalidPath(String),
    #[error("timestamp {0} out of range")]
    TimestampOutOfRange(DateTime<Utc>),
}

impl Contribution {
    /// Construct a validated record. The email must already be canonical,
    /// the path non-empty without newlines, the timestamp in range.
    pub fn new(
        email: String,
        name: Option<String>,
        timestamp: DateTime<Utc>,
        file_path: String,
        source_line: usize,
    ) -> Result<Self, ContributionError> {
        let at_ok = email.matches('@').count() == 1;
        if email.is_empty() || !at_ok || email.chars().any(|c| c.is_uppercase()) {
            return Err(ContributionError::InvalidEmail(email));
        }
        if file_path.is_empty() || file_path.contains('\n') || file_path.contains('\r') {
            return Err(ContributionError::InvalidPath(file_path));
        }
        if !timestamp_in_range(timestamp) {
            return Err(ContributionError::TimestampOutOfRange(timestamp));
        }
        Ok(Contribution {
            email,
            name,
            timestamp,
            file_path,
            source_line,
        })
    }

    /// The identity triple equality is defined over.
    pub fn key(&self) -> (&str, DateTime<Utc>, &str) {
        (&self.email, self.timestamp, &self.file_path)
    }

    /// One canonical commit-log line: `timestamp<TAB>email<TAB>file_path`.
    pub fn to_tsv_line(&self) -> String {
        format!(
            "{}\t{}\t{}",
            format_timestamp(self.timestamp),
            self.email,
            self.file_path
        )
    }
}

impl PartialEq for Contribution {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for Contribution {}

impl Hash for Contribution {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state);
    }
}

/// A line-level parse problem: where and why.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    /// 1-based input line.
    pub line: usize,
    /// Human-readable reason.
    pub reason: String,
}

/// Accounting for one parse run: accepted contributions, rejected regions,
/// and the diagnostics explaining rejections and warnings.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParseReport {
    /// Number of contributions produced.
    pub accepted: usize,
    /// Number of rejected entry-shaped regions (or commit-log lines).
    pub rejected: usize,
    /// Rejections and warnings, in input order.
    pub diagnostics: Vec<Diagnostic>,
}

impl ParseReport {
    /// Fold another report into this one (counts add, diagnostics append).
    pub fn merge(&mut self, other: ParseReport) {
        self.accepted += other.accepted;
        self.rejected += other.rejected;
        self.diagnostics.extend(other.diagnostics);
    }
}

/// Diagnostic reason recorded when invalid UTF-8 bytes were replaced.
/// These are warnings, not rejections.
pub const UTF8_WARNING: &str = "invalid UTF-8 bytes replaced";

/// Errors from the parsing entry points.
#[derive(Debug, Error)]
pub enum ChangelogError {
    #[error("read failed: {0}")]
    Io(#[from] io::Error),
    #[error("line {line}: {reason}")]
    Strict { line: usize, reason: String },
}

struct Collector {
    contributions: Vec<Contribution>,
    report: ParseReport,
    first_rejection: Option<Diagnostic>,
}

impl Collector {
    fn new() -> Self {
        Collector {
            contributions: Vec::new(),
            report: ParseReport::default(),
            first_rejection: None,
        }
    }

    fn accept(&mut self, c: Contribution) {
        self.contributions.push(c);
        self.report.accepted += 1;
    }

    fn reject(&mut self, line: usize, reason: impl Into<String>) {
        let d = Diagnostic {
            line,
            reason: reason.into(),
        };
        if self.first_rejection.is_none() {
            self.first_rejection = Some(d.clone());
        }
        self.report.rejected += 1;
        self.report.diagnostics.push(d);
    }

    fn warn(&mut self, line: usize, reason: impl Into<String>) {
        self.report.diagnostics.push(Diagnostic {
            line,
            reason: reason.into(),
        });
    }

    fn finish(self, strict: bool) -> Result<(Vec<Contribution>, ParseReport), ChangelogError> {
        if strict {
            if let Some(d) = self.first_rejection {
                return Err(ChangelogError::Strict {
                    line: d.line,
                    reason: d.reason,
                });
            }
        }
        Ok((self.contributions, self.report))
    }
}

enum EntryState {
    /// No header seen yet.
    None,
    /// Header parsed; bullets attach here.
    Active {
        email: String,
        name: Option<String>,
        timestamp: DateTime<Utc>,
    },
    /// Header rejected; bullets up to the next header belong to the
    /// rejected region and are skipped.
    Rejected,
}

/// Parse a ChangeLog stream into contributions.
///
/// Invalid UTF-8 is replaced and reported as a warning diagnostic. With
/// `strict` set, the first rejection aborts the parse with an error.
pub fn parse_changelog<R: Read>(
    mut reader: R,
    strict: bool,
) -> Result<(Vec<Contribution>, ParseReport), ChangelogError> {
    let mut bytes = Vec::new();
    reader.read_to_end(&mut bytes)?;
    let text = String::from_utf8_lossy(&bytes);
    parse_changelog_str(&text).finish(strict)
}

fn parse_changelog_str(text: &str) -> Collector {
    let mut col = Collector::new();
    let mut state = EntryState::None;

    for (idx, raw) in text.split('\n').enumerate() {
        let line_no = idx + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.contains('\u{FFFD}') {
            col.warn(line_no, UTF8_WARNING);
        }
        if line.is_empty() {
            continue;
        }
        if line.starts_with(' ') || line.starts_with('\t') {
            let Some(path) = bullet_path(line) else {
                continue; // body prose, reviewer lines, annotations
            };
            if path.is_empty() {
                col.reject(line_no, "empty file path in change bullet");
                continue;
            }
            match &state {
                EntryState::Active {
                    email,
                    name,
                    timestamp,
                } => match Contribution::new(
                    email.clone(),
                    name.clone(),
                    *timestamp,
                    path.to_string(),
                    line_no,
                ) {
                    Ok(c) => col.accept(c),
                    Err(e) => col.reject(line_no, e.to_string()),
                },
                EntryState::Rejected => {}
                EntryState::None => {
                    col.reject(line_no, "change bullet before any entry header");
                }
            }
            continue;
        }
        // Column-0 line: entry header candidate or ignorable marker.
        if !looks_like_date(line) {
            continue;
        }
        match parse_header(line) {
            Ok((timestamp, name, email)) => {
                state = EntryState::Active {
                    email,
                    name,
                    timestamp,
                };
            }
            Err(reason) => {
                col.reject(line_no, reason);
                state = EntryState::Rejected;
            }
        }
    }
    col
}

fn looks_like_date(line: &str) -> bool {
    let b = line.as_bytes();
    b.len() >= 10
        && b[0..4].iter().all(u8::is_ascii_digit)
        && b[4] == b'-'
        && b[5..7].iter().all(u8::is_ascii_digit)
        && b[7] == b'-'
        && b[8..10].iter().all(u8::is_ascii_digit)
        && (b.len() == 10 || b[10] == b' ' || b[10] == b'\t')
}

fn parse_header(line: &str) -> Result<(DateTime<Utc>, Option<String>, String), String> {
    let date = NaiveDate::parse_from_str(&line[..10], "%Y-%m-%d")
        .map_err(|_| format!("invalid date {:?} in entry header", &line[..10]))?;
    let timestamp = Utc.from_utc_datetime(&date.and_hms_opt(0, 0, 0).unwrap());
    if !timestamp_in_range(timestamp) {
        return Err(format!("entry date {date} out of range"));
    }
    let rest = &line[10..];
    let (lt, gt) = match (rest.find('<'), rest.rfind('>')) {
        (Some(lt), Some(gt)) if lt < gt => (lt, gt),
        _ => return Err("missing <email> in entry header".to_string()),
    };
    let email = canonicalize_email(&rest[lt..=gt]).map_err(|e| e.to_string())?;
    let name = rest[..lt].trim();
    let name = (!name.is_empty()).then(|| name.to_string());
    Ok((timestamp, name, email))
}

fn bullet_path(line: &str) -> Option<&str> {
    let t = line.trim_start();
    let rest = t.strip_prefix('*')?;
    let rest = rest.trim_start();
    let end = rest
        .find(|c: char| c.is_whitespace() || c == ':')
        .unwrap_or(rest.len());
    Some(&rest[..end])
}

/// Parse the canonical commit-log format: one contribution per line,
/// `ISO-8601-timestamp<TAB>email<TAB>file_path`. Timestamps may be full
/// RFC 3339 instants or bare dates (resolved to midnight UTC).
pub fn parse_commitlog<R: Read>(
    mut reader: R,
) -> Result<(Vec<Contribution>, ParseReport), ChangelogError> {
    let mut bytes = Vec::new();
    reader.read_to_end(&mut bytes)?;
    let text = String::from_utf8_lossy(&bytes);
    let mut col = Collector::new();

    for (idx, raw) in text.split('\n').enumerate() {
        let line_no = idx + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.contains('\u{FFFD}') {
            col.warn(line_no, UTF8_WARNING);
        }
        if line.is_empty() {
            continue;
        }
        let mut fields = line.splitn(3, '\t');
        let ts_str = fields.next().unwrap_or("");
        let (email_str, path) = match (fields.next(), fields.next()) {
            (Some(e), Some(p)) => (e, p),
            _ => {
                col.reject(line_no, "field count");
                continue;
            }
        };
        let Some(timestamp) = parse_timestamp(ts_str) else {
            col.reject(line_no, format!("unparseable timestamp {ts_str:?}"));
            continue;
        };
        let email = match canonicalize_email(email_str) {
            Ok(e) => e,
            Err(e) => {
                col.reject(line_no, e.to_string());
                continue;
            }
        };
        match Contribution::new(email, None, timestamp, path.to_string(), line_no) {
            Ok(c) => col.accept(c),
            Err(e) => col.reject(line_no, e.to_string()),
        }
    }
    col.finish(false)
}

/// Parse an ISO-8601 instant: RFC 3339, naive `YYYY-MM-DDTHH:MM:SS` (UTC
/// assumed), or bare `YYYY-MM-DD` (midnight UTC). Sub-second precision is
/// truncated.
pub fn parse_timestamp(s: &str) -> Option<DateTime<Utc>> {
    if let Ok(dt) = DateTime::parse_from_rfc3339(s) {
        let utc = dt.with_timezone(&Utc);
        return Some(DateTime::from_timestamp(utc.timestamp(), 0).unwrap_or(utc));
    }
    if let Ok(naive) = NaiveDateTime::parse_from_str(s, "%Y-%m-%dT%H:%M:%S") {
        return Some(Utc.from_utc_datetime(&naive));
    }
    if let Ok(date) = NaiveDate::parse_from_str(s, "%Y-%m-%d") {
        return Some(Utc.from_utc_datetime(&date.and_hms_opt(0, 0, 0).unwrap()));
    }
    None
}

/// Render an instant in the canonical `YYYY-MM-DDTHH:MM:SSZ` form.
pub fn format_timestamp(t: DateTime<Utc>) -> String {
    t.format("%Y-%m-%dT%H:%M:%SZ").to_string()
}

/// Serialize contributions to the canonical commit-log format.
pub fn write_commitlog<W: io::Write>(contribs: &[Contribution], mut w: W) -> io::Result<()> {
    for c in contribs {
        writeln!(w, "{}", c.to_tsv_line())?;
    }
    Ok(())
}

/// Serialize contributions to an in-memory commit log.
pub fn commitlog_to_string(contribs: &[Contribution]) -> String {
    let mut out = Vec::new();
    write_commitlog(contribs, &mut out).expect("write to Vec cannot fail");
    String::from_utf8(out).expect("commit log is UTF-8")
}

/// Flag duplicate (email, timestamp, file) triples and out-of-range
/// timestamps without mutating the input.
pub fn validate_contributions(contribs: &[Contribution]) -> ParseReport {
    let mut report = ParseReport::default();
    let mut seen: HashSet<(&str, DateTime<Utc>, &str)> = HashSet::new();
    for c in contribs {
        if !timestamp_in_range(c.timestamp) {
            report.rejected += 1;
            report.diagnostics.push(Diagnostic {
                line: c.source_line,
                reason: format!("timestamp {} out of range", format_timestamp(c.timestamp)),
            });
            continue;
        }
        if !seen.insert(c.key()) {
            report.rejected += 1;
            report.diagnostics.push(Diagnostic {
                line: c.source_line,
                reason: format!(
                    "duplicate contribution ({}, {}, {})",
                    c.email,
                    format_timestamp(c.timestamp),
                    c.file_path
                ),
            });
            continue;
        }
        report.accepted += 1;
    }
    report
}
