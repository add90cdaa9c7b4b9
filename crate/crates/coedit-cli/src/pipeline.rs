//! The end-to-end pipeline and the stage helpers the subcommands share.
//!
//! Every artifact is a deterministic byte stream, so running twice with the
//! same inputs and seed produces identical files and an identical manifest.
//! The subcommands reuse these helpers, which keeps staged runs byte-equal
//! to `coedit run`.

use std::fs;
use std::path::{Path, PathBuf};

use chrono::{DateTime, Duration, Utc};
use serde::Serialize;
use sha2::{Digest, Sha256};

use coedit_core::affiliation::AffiliationTable;
use coedit_core::changelog::{
    commitlog_to_string, format_timestamp, parse_changelog, parse_commitlog,
    validate_contributions, Contribution, ParseReport,
};
use coedit_core::graph::{build_bipartite, project_collaboration, CollabGraph, FileFilter};
use coedit_core::metrics::graph_summary;
use coedit_core::render::{
    export_dot, export_graphml, export_metrics, export_svg, layout_force_directed, MetricsFormat,
    StyleMap,
};
use coedit_core::timeline::{date_to_utc, preset, EventTimeline, Slice};

use crate::config::{Format, PipelineConfig};
use crate::CliError;

/// One pipeline artifact: where it landed, its content hash, which stage
/// produced it, and the slice it belongs to (`None` for span-wide files).
#[derive(Debug, Clone, Serialize)]
pub struct ArtifactEntry {
    pub path: String,
    pub sha256: String,
    pub stage: &'static str,
    pub slice: Option<usize>,
}

/// What a pipeline run produced.
#[derive(Debug)]
pub struct PipelineOutcome {
    pub manifest: Vec<ArtifactEntry>,
    pub slice_count: usize,
    pub cumulative_nodes: usize,
    pub cumulative_edges: usize,
}

/// Read a file with path context on failure.
pub fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn read_text(path: &Path) -> Result<String, CliError> {
    String::from_utf8(read_file(path)?)
        .map_err(|_| CliError::Io(format!("{}: not valid UTF-8", path.display())))
}

/// Print one input's parse report to stderr.
pub fn report_to_stderr(path: &Path, report: &ParseReport) {
    eprintln!(
        "parsed {}: {} contributions, {} rejected",
        path.display(),
        report.accepted,
        report.rejected
    );
    if report.accepted == 0 && report.rejected == 0 {
        eprintln!("warning: {}: no contributions found", path.display());
    }
    for d in report.diagnostics.iter().take(20) {
        eprintln!("  line {}: {}", d.line, d.reason);
    }
    if report.diagnostics.len() > 20 {
        eprintln!("  ... {} more diagnostics", report.diagnostics.len() - 20);
    }
}

/// Parse every input in listed order (changelogs, then commitlogs) into one
/// contribution list.
pub fn parse_inputs(
    changelogs: &[PathBuf],
    commitlogs: &[PathBuf],
    strict: bool,
) -> Result<Vec<Contribution>, CliError> {
    let mut all = Vec::new();
    for path in changelogs {
        let bytes = read_file(path)?;
        let (contribs, report) = parse_changelog(&bytes[..], strict)
            .map_err(|e| CliError::Failure(format!("{}: {e}", path.display())))?;
        report_to_stderr(path, &report);
        all.extend(contribs);
    }
    for path in commitlogs {
        let bytes = read_file(path)?;
        let (contribs, report) = parse_commitlog(&bytes[..])
            .map_err(|e| CliError::Failure(format!("{}: {e}", path.display())))?;
        if strict && report.rejected > 0 {
            let first = report
                .diagnostics
                .iter()
                .find(|d| d.reason != coedit_core::changelog::UTF8_WARNING)
                .expect("a rejection has a diagnostic");
            return Err(CliError::Failure(format!(
                "{}: line {}: {}",
                path.display(),
                first.line,
                first.reason
            )));
        }
        report_to_stderr(path, &report);
        all.extend(contribs);
    }
    Ok(all)
}

/// Load the affiliation table from a path, or fall back to the built-in
/// ten-organization table.
pub fn load_affiliations(path: Option<&Path>) -> Result<AffiliationTable, CliError> {
    match path {
        None => Ok(AffiliationTable::default_preset()),
        Some(p) => AffiliationTable::parse(&read_text(p)?)
            .map_err(|e| CliError::Config(format!("{}: {e}", p.display()))),
    }
}

/// Load the style map from a path, or fall back to the built-in palette.
pub fn load_style(path: Option<&Path>) -> Result<StyleMap, CliError> {
    match path {
        None => Ok(StyleMap::default_preset()),
        Some(p) => StyleMap::parse(&read_text(p)?)
            .map_err(|e| CliError::Config(format!("{}: {e}", p.display()))),
    }
}

/// A `[start, end)` pair of UTC instants.
pub type Span = (DateTime<Utc>, DateTime<Utc>);

/// Resolve the timeline from a file or preset name; no setting means an
/// empty timeline (a single slice). Returns the timeline and the preset's
/// natural span when one applies.
pub fn load_timeline(
    timeline_path: Option<&Path>,
    preset_name: Option<&str>,
) -> Result<(EventTimeline, Option<Span>), CliError> {
    if let Some(p) = timeline_path {
        let t = EventTimeline::parse(&read_text(p)?)
            .map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
        return Ok((t, None));
    }
    if let Some(name) = preset_name {
        let p = preset(name)
            .ok_or_else(|| CliError::Config(format!("unknown preset {name:?}")))?;
        let span = p
            .span
            .map(|(a, b)| (date_to_utc(a), date_to_utc(b)));
        return Ok((p.timeline, span));
    }
    Ok((EventTimeline::empty(), None))
}

/// Choose the analysis span: explicit flags win, then the preset's span,
/// then the data's min..max+1s, then a warned 1-day fallback for empty
/// inputs.
pub fn resolve_span(
    flag_start: Option<DateTime<Utc>>,
    flag_end: Option<DateTime<Utc>>,
    preset_span: Option<Span>,
    contribs: &[Contribution],
) -> Span {
    let data_span = || -> Option<Span> {
        let min = contribs.iter().map(|c| c.timestamp).min()?;
        let max = contribs.iter().map(|c| c.timestamp).max()?;
        Some((min, max + Duration::seconds(1)))
    };
    let (default_start, default_end) = preset_span.or_else(data_span).unwrap_or_else(|| {
        eprintln!("warning: no contributions and no span given; using a 1-day placeholder span");
        let epoch = DateTime::from_timestamp(0, 0).unwrap();
        (epoch, epoch + Duration::days(1))
    });
    (
        flag_start.unwrap_or(default_start),
        flag_end.unwrap_or(default_end),
    )
}

/// Interval for a `graph` invocation without explicit bounds: the data's
/// own min..max+1s.
pub fn infer_interval(contribs: &[Contribution]) -> Span {
    resolve_span(None, None, None, contribs)
}

/// A slice covering the whole span, for the cumulative graph.
pub fn span_slice(start: DateTime<Utc>, end: DateTime<Utc>) -> Slice {
    Slice {
        index: 0,
        start,
        end,
        label: "cumulative".to_string(),
    }
}

/// Serialize the slice table: one `index<TAB>start<TAB>end<TAB>label` line
/// per slice.
pub fn slices_tsv(slices: &[Slice]) -> String {
    let mut out = String::new();
    for s in slices {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\n",
            s.index,
            format_timestamp(s.start),
            format_timestamp(s.end),
            s.label
        ));
    }
    out
}

/// The contributions of one slice, serialized in input order.
pub fn slice_tsv(contribs: &[Contribution], slice: &Slice) -> String {
    let filtered: Vec<Contribution> = contribs
        .iter()
        .filter(|c| slice.contains(c.timestamp))
        .cloned()
        .collect();
    commitlog_to_string(&filtered)
}

struct ArtifactWriter {
    dir: PathBuf,
    manifest: Vec<ArtifactEntry>,
}

impl ArtifactWriter {
    fn write(
        &mut self,
        name: &str,
        bytes: &[u8],
        stage: &'static str,
        slice: Option<usize>,
    ) -> Result<(), CliError> {
        let path = self.dir.join(name);
        fs::write(&path, bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        self.manifest.push(ArtifactEntry {
            path: name.to_string(),
            sha256: hex::encode(Sha256::digest(bytes)),
            stage,
            slice,
        });
        Ok(())
    }
}

/// Run the whole pipeline per the config. Artifacts land in the output
/// directory; the manifest lists each with its SHA-256.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<PipelineOutcome, CliError> {
    let contribs = parse_inputs(&cfg.changelogs, &cfg.commitlogs, cfg.strict)?;
    let validation = validate_contributions(&contribs);
    if validation.rejected > 0 {
        eprintln!(
            "warning: {} duplicate or out-of-range contributions flagged (kept; graphs deduplicate per slice)",
            validation.rejected
        );
        for d in validation.diagnostics.iter().take(5) {
            eprintln!("  line {}: {}", d.line, d.reason);
        }
    }
    let table = load_affiliations(cfg.affiliations.as_deref())?;
    let style = load_style(cfg.style.as_deref())?;
    let (timeline, preset_span) =
        load_timeline(cfg.timeline.as_deref(), cfg.preset.as_deref())?;
    let (span_start, span_end) =
        resolve_span(cfg.span_start, cfg.span_end, preset_span, &contribs);
    let (slices, dropped) = timeline
        .build_slices(span_start, span_end)
        .map_err(|e| CliError::Config(e.to_string()))?;
    for e in &dropped {
        eprintln!(
            "warning: event {} ({}) lies outside the span and was dropped",
            e.date, e.label
        );
    }
    let filter =
        FileFilter::new(&cfg.excludes).map_err(|e| CliError::Config(e.to_string()))?;
    fs::create_dir_all(&cfg.output_dir)
        .map_err(|e| CliError::Io(format!("{}: {e}", cfg.output_dir.display())))?;

    let mut writer = ArtifactWriter {
        dir: cfg.output_dir.clone(),
        manifest: Vec::new(),
    };
    writer.write(
        "contributions.tsv",
        commitlog_to_string(&contribs).as_bytes(),
        "parse",
        None,
    )?;
    writer.write("slices.tsv", slices_tsv(&slices).as_bytes(), "slice", None)?;
    for s in &slices {
        writer.write(
            &format!("slice-{}.tsv", s.index),
            slice_tsv(&contribs, s).as_bytes(),
            "slice",
            Some(s.index),
        )?;
    }

    let mut cumulative_counts = (0, 0);
    let cumulative = span_slice(span_start, span_end);
    let mut jobs: Vec<(String, &Slice, Option<usize>)> = slices
        .iter()
        .map(|s| (format!("slice-{}", s.index), s, Some(s.index)))
        .collect();
    jobs.push(("cumulative".to_string(), &cumulative, None));

    for (name, slice, slice_idx) in jobs {
        let graph = project_collaboration(&build_bipartite(&contribs, slice, &table, &filter));
        eprintln!(
            "{name}: {} nodes, {} edges",
            graph.node_count(),
            graph.edge_count()
        );
        if slice_idx.is_none() {
            cumulative_counts = (graph.node_count(), graph.edge_count());
        }
        emit_graph_artifacts(&graph, &name, slice_idx, cfg, &style, &mut writer)?;
    }

    let mut manifest_bytes = serde_json::to_vec_pretty(&writer.manifest)
        .expect("manifest serialization cannot fail");
    manifest_bytes.push(b'\n');
    let manifest_path = cfg.output_dir.join("manifest.json");
    fs::write(&manifest_path, &manifest_bytes)
        .map_err(|e| CliError::Io(format!("{}: {e}", manifest_path.display())))?;

    report_expectations(cfg, cumulative_counts);
    Ok(PipelineOutcome {
        manifest: writer.manifest,
        slice_count: slices.len(),
        cumulative_nodes: cumulative_counts.0,
        cumulative_edges: cumulative_counts.1,
    })
}

fn emit_graph_artifacts(
    graph: &CollabGraph,
    name: &str,
    slice_idx: Option<usize>,
    cfg: &PipelineConfig,
    style: &StyleMap,
    writer: &mut ArtifactWriter,
) -> Result<(), CliError> {
    if cfg.formats.contains(&Format::Graphml) {
        writer.write(
            &format!("{name}.graphml"),
            &export_graphml(graph, None, style),
            "graph",
            slice_idx,
        )?;
    }
    if cfg.formats.contains(&Format::Csv) || cfg.formats.contains(&Format::Json) {
        let report = graph_summary(graph).map_err(|e| CliError::Failure(e.to_string()))?;
        if cfg.formats.contains(&Format::Csv) {
            writer.write(
                &format!("{name}.metrics.csv"),
                &export_metrics(&report, MetricsFormat::Csv),
                "metrics",
                slice_idx,
            )?;
        }
        if cfg.formats.contains(&Format::Json) {
            writer.write(
                &format!("{name}.metrics.json"),
                &export_metrics(&report, MetricsFormat::Json),
                "metrics",
                slice_idx,
            )?;
        }
    }
    if cfg.formats.contains(&Format::Dot) {
        writer.write(
            &format!("{name}.dot"),
            &export_dot(graph, style),
            "render",
            slice_idx,
        )?;
    }
    if cfg.formats.contains(&Format::Svg) {
        let layout = layout_force_directed(graph, cfg.seed, cfg.layout_iterations);
        let svg =
            export_svg(graph, &layout, style).map_err(|e| CliError::Failure(e.to_string()))?;
        writer.write(&format!("{name}.svg"), &svg, "render", slice_idx)?;
    }
    Ok(())
}

fn report_expectations(cfg: &PipelineConfig, (nodes, edges): (usize, usize)) {
    eprintln!("cumulative graph: {nodes} nodes, {edges} edges");
    if let Some(expected) = cfg.expect_nodes {
        eprintln!(
            "expected nodes: {expected} (diff {:+})",
            nodes as i64 - expected as i64
        );
    }
    if let Some(expected) = cfg.expect_edges {
        eprintln!(
            "expected edges: {expected} (diff {:+})",
            edges as i64 - expected as i64
        );
    }
}
