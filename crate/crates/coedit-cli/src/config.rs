//! Pipeline configuration: the key=value config file, flag overrides, and
//! the resolved settings the pipeline runs with.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::str::FromStr;

use chrono::{DateTime, Utc};
use coedit_core::changelog::parse_timestamp;
use coedit_core::graph::FileFilter;

use crate::CliError;

/// Which artifact formats the pipeline emits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Format {
    Graphml,
    Dot,
    Svg,
    Csv,
    Json,
}

impl Format {
    pub fn all() -> BTreeSet<Format> {
        [
            Format::Graphml,
            Format::Dot,
            Format::Svg,
            Format::Csv,
            Format::Json,
        ]
        .into_iter()
        .collect()
    }
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "graphml" => Ok(Format::Graphml),
            "dot" => Ok(Format::Dot),
            "svg" => Ok(Format::Svg),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!(
                "unknown format {other:?} (expected graphml, dot, svg, csv, json)"
            )),
        }
    }
}

/// Everything `coedit run` needs, after config file and flags are merged.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub changelogs: Vec<PathBuf>,
    pub commitlogs: Vec<PathBuf>,
    pub affiliations: Option<PathBuf>,
    pub timeline: Option<PathBuf>,
    pub preset: Option<String>,
    pub span_start: Option<DateTime<Utc>>,
    pub span_end: Option<DateTime<Utc>>,
    pub excludes: Vec<String>,
    pub output_dir: PathBuf,
    pub seed: u64,
    pub style: Option<PathBuf>,
    pub formats: BTreeSet<Format>,
    pub strict: bool,
    pub layout_iterations: usize,
    pub expect_nodes: Option<usize>,
    pub expect_edges: Option<usize>,
}

/// Raw settings from one source (config file or flags); `None`/empty means
/// "not set here".
#[derive(Debug, Clone, Default)]
pub struct ConfigLayer {
    pub changelogs: Vec<PathBuf>,
    pub commitlogs: Vec<PathBuf>,
    pub affiliations: Option<PathBuf>,
    pub timeline: Option<PathBuf>,
    pub preset: Option<String>,
    pub span_start: Option<String>,
    pub span_end: Option<String>,
    pub excludes: Vec<String>,
    pub no_default_excludes: Option<bool>,
    pub output_dir: Option<PathBuf>,
    pub seed: Option<u64>,
    pub style: Option<PathBuf>,
    pub formats: Option<String>,
    pub strict: Option<bool>,
    pub layout_iterations: Option<usize>,
    pub expect_nodes: Option<usize>,
    pub expect_edges: Option<usize>,
}

impl ConfigLayer {
    /// Parse the line-oriented `key = value` config file. Repeatable keys
    /// (`changelog`, `commitlog`, `exclude`) accumulate; `#` starts a
    /// comment.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut layer = ConfigLayer::default();
        for (idx, raw_line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let trimmed = raw_line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (key, value) = trimmed.split_once('=').ok_or_else(|| {
                CliError::Config(format!(
                    "config line {line_no}: expected \"key = value\", got {trimmed:?}"
                ))
            })?;
            let key = key.trim();
            let value = value.trim().to_string();
            if value.is_empty() {
                return Err(CliError::Config(format!(
                    "config line {line_no}: empty value for {key:?}"
                )));
            }
            match key {
                "changelog" => layer.changelogs.push(PathBuf::from(value)),
                "commitlog" => layer.commitlogs.push(PathBuf::from(value)),
                "affiliations" => layer.affiliations = Some(PathBuf::from(value)),
                "timeline" => layer.timeline = Some(PathBuf::from(value)),
                "preset" => layer.preset = Some(value),
                "span_start" => layer.span_start = Some(value),
                "span_end" => layer.span_end = Some(value),
                "exclude" => layer.excludes.push(value),
                "no_default_excludes" => {
                    layer.no_default_excludes = Some(parse_bool(&value, line_no)?)
                }
                "output_dir" => layer.output_dir = Some(PathBuf::from(value)),
                "seed" => layer.seed = Some(parse_num(&value, key, line_no)?),
                "style" => layer.style = Some(PathBuf::from(value)),
                "formats" => layer.formats = Some(value),
                "strict" => layer.strict = Some(parse_bool(&value, line_no)?),
                "layout_iterations" => {
                    layer.layout_iterations = Some(parse_num(&value, key, line_no)?)
                }
                "expect_nodes" => layer.expect_nodes = Some(parse_num(&value, key, line_no)?),
                "expect_edges" => layer.expect_edges = Some(parse_num(&value, key, line_no)?),
                other => {
                    return Err(CliError::Config(format!(
                        "config line {line_no}: unknown key {other:?}"
                    )))
                }
            }
        }
        Ok(layer)
    }

    /// Overlay `flags` on top of this layer (flag settings win) and resolve
    /// defaults into a validated [`PipelineConfig`].
    pub fn resolve(self, flags: ConfigLayer) -> Result<PipelineConfig, CliError> {
        let base = self;
        let changelogs = pick_vec(flags.changelogs, base.changelogs);
        let commitlogs = pick_vec(flags.commitlogs, base.commitlogs);
        if changelogs.is_empty() && commitlogs.is_empty() {
            return Err(CliError::Config(
                "no inputs: give at least one changelog or commitlog".into(),
            ));
        }
        let timeline = flags.timeline.or(base.timeline);
        let preset = flags.preset.or(base.preset);
        if timeline.is_some() && preset.is_some() {
            return Err(CliError::Config(
                "timeline and preset are mutually exclusive".into(),
            ));
        }
        if let Some(name) = &preset {
            if coedit_core::timeline::preset(name).is_none() {
                return Err(CliError::Config(format!(
                    "unknown preset {name:?} (available: {})",
                    coedit_core::timeline::preset_names().join(", ")
                )));
            }
        }
        let no_default_excludes = flags
            .no_default_excludes
            .or(base.no_default_excludes)
            .unwrap_or(false);
        let mut excludes = pick_vec(flags.excludes, base.excludes);
        if excludes.is_empty() && !no_default_excludes {
            excludes = FileFilter::default_patterns();
        }
        let formats = match flags.formats.or(base.formats) {
            None => Format::all(),
            Some(list) => {
                let mut set = BTreeSet::new();
                for item in list.split(',') {
                    set.insert(item.parse::<Format>().map_err(CliError::Config)?);
                }
                set
            }
        };
        Ok(PipelineConfig {
            changelogs,
            commitlogs,
            affiliations: flags.affiliations.or(base.affiliations),
            timeline,
            preset,
            span_start: parse_span(flags.span_start.or(base.span_start), "span_start")?,
            span_end: parse_span(flags.span_end.or(base.span_end), "span_end")?,
            excludes,
            output_dir: flags
                .output_dir
                .or(base.output_dir)
                .unwrap_or_else(|| PathBuf::from("coedit-out")),
            seed: flags.seed.or(base.seed).unwrap_or(42),
            style: flags.style.or(base.style),
            formats,
            strict: flags.strict.or(base.strict).unwrap_or(false),
            layout_iterations: flags
                .layout_iterations
                .or(base.layout_iterations)
                .unwrap_or(500),
            expect_nodes: flags.expect_nodes.or(base.expect_nodes),
            expect_edges: flags.expect_edges.or(base.expect_edges),
        })
    }
}

fn pick_vec<T>(flag: Vec<T>, file: Vec<T>) -> Vec<T> {
    if flag.is_empty() {
        file
    } else {
        flag
    }
}

fn parse_bool(value: &str, line: usize) -> Result<bool, CliError> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(CliError::Config(format!(
            "config line {line}: expected true or false, got {other:?}"
        ))),
    }
}

fn parse_num<T: FromStr>(value: &str, key: &str, line: usize) -> Result<T, CliError> {
    value.parse().map_err(|_| {
        CliError::Config(format!(
            "config line {line}: bad number {value:?} for {key:?}"
        ))
    })
}

/// Parse a span boundary given as a date or full timestamp.
pub fn parse_span(value: Option<String>, which: &str) -> Result<Option<DateTime<Utc>>, CliError> {
    match value {
        None => Ok(None),
        Some(s) => parse_timestamp(&s)
            .map(Some)
            .ok_or_else(|| CliError::Config(format!("unparseable {which} {s:?}"))),
    }
}
