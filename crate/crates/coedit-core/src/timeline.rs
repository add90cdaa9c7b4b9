//! Industry-event timelines and half-open analysis slices.
//!
//! An [`EventTimeline`] is an ordered list of cut dates. Over a data span
//! `[start, end)` the k in-span cuts produce k+1 [`Slice`]s that tile the
//! span with no gaps or overlaps; a cut date belongs to the slice it opens.

use chrono::{DateTime, NaiveDate, TimeZone, Utc};
use thiserror::Error;

/// One cut: the date an event took effect, plus a short label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimelineEvent {
    pub date: NaiveDate,
    pub label: String,
}

/// Strictly increasing list of dated events.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EventTimeline {
    events: Vec<TimelineEvent>,
}

/// A half-open analysis interval `[start, end)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slice {
    /// 0-based position within the slice list.
    pub index: usize,
    /// Inclusive start.
    pub start: DateTime<Utc>,
    /// Exclusive end.
    pub end: DateTime<Utc>,
    /// Human-readable interval description.
    pub label: String,
}

impl Slice {
    /// True when `t` falls inside this slice.
    pub fn contains(&self, t: DateTime<Utc>) -> bool {
        self.start <= t && t < self.end
    }
}

/// A named built-in timeline, optionally carrying its natural data span.
#[derive(Debug, Clone)]
pub struct Preset {
    pub name: &'static str,
    pub timeline: EventTimeline,
    pub span: Option<(NaiveDate, NaiveDate)>,
}

/// Errors from timeline loading and slice assignment.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum TimelineError {
    #[error("line {line}: unparseable date in {text:?}")]
    BadDate { line: usize, text: String },
    #[error("line {line}: date {date} does not increase over the previous event")]
    NonIncreasing { line: usize, date: NaiveDate },
    #[error("line {line}: missing event label")]
    MissingLabel { line: usize },
    #[error("span start {start} is not before span end {end}")]
    InvertedSpan {
        start: DateTime<Utc>,
        end: DateTime<Utc>,
    },
    #[error("timestamp {0} is outside the sliced span")]
    OutOfSpan(DateTime<Utc>),
}

/// Midnight UTC of a calendar date.
pub fn date_to_utc(d: NaiveDate) -> DateTime<Utc> {
    Utc.from_utc_datetime(&d.and_hms_opt(0, 0, 0).unwrap())
}

fn fmt_instant(t: DateTime<Utc>) -> String {
    if t == date_to_utc(t.date_naive()) {
        t.format("%Y-%m-%d").to_string()
    } else {
        t.format("%Y-%m-%dT%H:%M:%SZ").to_string()
    }
}

impl EventTimeline {
    /// Timeline with no events: one slice spans everything.
    pub fn empty() -> Self {
        EventTimeline::default()
    }

    /// Build from events, enforcing strictly increasing dates and
    /// non-empty labels.
    pub fn new(events: Vec<TimelineEvent>) -> Result<Self, TimelineError> {
        for (i, e) in events.iter().enumerate() {
            if e.label.is_empty() {
                return Err(TimelineError::MissingLabel { line: i + 1 });
            }
            if i > 0 && events[i - 1].date >= e.date {
                return Err(TimelineError::NonIncreasing {
                    line: i + 1,
                    date: e.date,
                });
            }
        }
        Ok(EventTimeline { events })
    }

    /// Parse the `YYYY-MM-DD  label` file format. `#` starts a comment;
    /// events must appear in strictly increasing date order.
    pub fn parse(text: &str) -> Result<Self, TimelineError> {
        let mut events = Vec::new();
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
            let (date_str, label) = match line.split_once(char::is_whitespace) {
                Some((d, l)) => (d, l.trim()),
                None => (line, ""),
            };
            let date = NaiveDate::parse_from_str(date_str, "%Y-%m-%d").map_err(|_| {
                TimelineError::BadDate {
                    line: line_no,
                    text: line.to_string(),
                }
            })?;
            if label.is_empty() {
                return Err(TimelineError::MissingLabel { line: line_no });
            }
            if let Some(last) = events.last() {
                let last: &TimelineEvent = last;
                if last.date >= date {
                    return Err(TimelineError::NonIncreasing {
                        line: line_no,
                        date,
                    });
                }
            }
            events.push(TimelineEvent {
                date,
                label: label.to_string(),
            });
        }
        Ok(EventTimeline { events })
    }

    /// The events in date order.
    pub fn events(&self) -> &[TimelineEvent] {
        &self.events
    }

    /// Slice the span `[span_start, span_end)` at every event strictly
    /// inside it. Returns the slices plus any events that fell outside the
    /// span (callers typically surface those as warnings).
    pub fn build_slices(
        &self,
        span_start: DateTime<Utc>,
        span_end: DateTime<Utc>,
    ) -> Result<(Vec<Slice>, Vec<TimelineEvent>), TimelineError> {
        if span_start >= span_end {
            return Err(TimelineError::InvertedSpan {
                start: span_start,
                end: span_end,
            });
        }
        let mut cuts = Vec::new();
        let mut dropped = Vec::new();
        for e in &self.events {
            let t = date_to_utc(e.date);
            if span_start < t && t < span_end {
                cuts.push(t);
            } else {
                dropped.push(e.clone());
            }
        }
        let mut bounds = Vec::with_capacity(cuts.len() + 2);
        bounds.push(span_start);
        bounds.extend(cuts);
        bounds.push(span_end);
        let slices = bounds
            .windows(2)
            .enumerate()
            .map(|(index, w)| Slice {
                index,
                start: w[0],
                end: w[1],
                label: format!("{}..{}", fmt_instant(w[0]), fmt_instant(w[1])),
            })
            .collect();
        Ok((slices, dropped))
    }
}

/// The built-in timeline presets.
pub fn preset_names() -> &'static [&'static str] {
    &["webkit-figures", "table-1"]
}

/// Look up a built-in preset by name.
///
/// `webkit-figures` carries the three cuts that divide WebKit's public
/// 2006-2013 history into its four standard analysis windows;
/// `table-1` is the denser list of seven industry events over the same
/// span. Months recorded without an exact day cut on the 1st.
pub fn preset(name: &str) -> Option<Preset> {
    let webkit_span = Some((
        NaiveDate::from_ymd_opt(2006, 9, 1).unwrap(),
        NaiveDate::from_ymd_opt(2013, 4, 3).unwrap(),
    ));
    let ev = |y, m, d, label: &str| TimelineEvent {
        date: NaiveDate::from_ymd_opt(y, m, d).unwrap(),
        label: label.to_string(),
    };
    match name {
        "webkit-figures" => Some(Preset {
            name: "webkit-figures",
            timeline: EventTimeline::new(vec![
                ev(2007, 6, 29, "iphone-release"),
                ev(2008, 9, 30, "chrome-android-launch"),
                ev(2011, 2, 3, "nokia-microsoft-partnership"),
            ])
            .expect("preset is ordered"),
            span: webkit_span,
        }),
        "table-1" => Some(Preset {
            name: "table-1",
            timeline: EventTimeline::new(vec![
                ev(2006, 9, 1, "webkit-source-published"),
                ev(2007, 6, 29, "iphone-release"),
                ev(2008, 9, 30, "chrome-android-launch"),
                ev(2009, 6, 1, "nokia-intel-alliance"),
                ev(2011, 2, 3, "nokia-microsoft-partnership"),
                ev(2012, 7, 1, "apple-samsung-patent-trial"),
                ev(2013, 4, 3, "webkit-fork-announced"),
            ])
            .expect("preset is ordered"),
            span: webkit_span,
        }),
        _ => None,
    }
}

/// Index of the unique slice containing `t`.
pub fn assign_slice(t: DateTime<Utc>, slices: &[Slice]) -> Result<usize, TimelineError> {
    let idx = slices.partition_point(|s| s.start <= t);
    if idx == 0 {
        return Err(TimelineError::OutOfSpan(t));
    }
    let candidate = &slices[idx - 1];
    if t < candidate.end {
        Ok(candidate.index)
    } else {
        Err(TimelineError::OutOfSpan(t))
    }
}
