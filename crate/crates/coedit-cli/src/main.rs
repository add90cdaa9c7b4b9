//! `coedit` — mine change logs into temporal collaboration graphs.
//!
//! `coedit run` drives the whole pipeline; `parse`, `slice`, `graph`,
//! `metrics`, and `render` expose the stages individually so they compose
//! through files (commit-log TSV and GraphML).
//!
//! Exit codes: 0 success, 1 parse/computation failure (including strict
//! mode), 2 configuration error, 3 I/O error.

mod config;
mod pipeline;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use coedit_core::changelog::{commitlog_to_string, parse_commitlog};
use coedit_core::graph::{build_bipartite, project_collaboration, FileFilter};
use coedit_core::metrics::graph_summary;
use coedit_core::render::{
    export_dot, export_graphml, export_metrics, export_svg, import_graphml, layout_force_directed,
    MetricsFormat,
};
use coedit_core::timeline::Slice;

use config::{ConfigLayer, PipelineConfig};
use pipeline::{
    infer_interval, load_affiliations, load_style, load_timeline, parse_inputs, read_file,
    resolve_span, run_pipeline, slice_tsv, slices_tsv, span_slice,
};

/// Errors carrying their process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Parse or computation failure (exit 1).
    Failure(String),
    /// Bad configuration or arguments (exit 2).
    Config(String),
    /// Filesystem problem (exit 3).
    Io(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Failure(m) | CliError::Config(m) | CliError::Io(m) => write!(f, "{m}"),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Failure(_) => 1,
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "coedit",
    version,
    about = "Mine version-control change logs into temporal collaboration graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline: parse, slice, graph, metrics, render.
    Run(RunArgs),
    /// Parse ChangeLog / commit-log inputs into the canonical TSV.
    Parse(ParseArgs),
    /// Split a commit-log TSV into per-slice TSVs.
    Slice(SliceArgs),
    /// Build a collaboration graph (GraphML) from a commit-log TSV.
    Graph(GraphArgs),
    /// Compute the metrics report (CSV or JSON) for a GraphML graph.
    Metrics(MetricsArgs),
    /// Render a GraphML graph to SVG or DOT.
    Render(RenderArgs),
}

#[derive(clap::Args)]
struct RunArgs {
    /// key = value config file; flags override its settings
    #[arg(long)]
    config: Option<PathBuf>,
    /// ChangeLog input (repeatable)
    #[arg(long = "changelog")]
    changelogs: Vec<PathBuf>,
    /// Commit-log TSV input (repeatable)
    #[arg(long = "commitlog")]
    commitlogs: Vec<PathBuf>,
    /// Affiliation table file (default: the built-in table)
    #[arg(long)]
    affiliations: Option<PathBuf>,
    /// Timeline file (mutually exclusive with --preset)
    #[arg(long)]
    timeline: Option<PathBuf>,
    /// Built-in timeline preset: webkit-figures or table-1
    #[arg(long)]
    preset: Option<String>,
    /// Span start (date or timestamp); default: preset span or data minimum
    #[arg(long)]
    span_start: Option<String>,
    /// Span end, exclusive; default: preset span or data maximum + 1s
    #[arg(long)]
    span_end: Option<String>,
    /// File-exclusion glob (repeatable; default: **/ChangeLog*)
    #[arg(long = "exclude")]
    excludes: Vec<String>,
    /// Disable the default ChangeLog exclusion
    #[arg(long)]
    no_default_excludes: bool,
    /// Output directory (default: coedit-out)
    #[arg(short = 'o', long)]
    output_dir: Option<PathBuf>,
    /// Layout seed (default: 42)
    #[arg(long)]
    seed: Option<u64>,
    /// Style file (default: the built-in palette)
    #[arg(long)]
    style: Option<PathBuf>,
    /// Comma-separated artifact formats (default: graphml,dot,svg,csv,json)
    #[arg(long)]
    formats: Option<String>,
    /// Turn parse rejections into a failure
    #[arg(long)]
    strict: bool,
    /// Force-directed layout iterations (default: 500)
    #[arg(long)]
    layout_iterations: Option<usize>,
    /// Reference node count to report a diff against
    #[arg(long)]
    expect_nodes: Option<usize>,
    /// Reference edge count to report a diff against
    #[arg(long)]
    expect_edges: Option<usize>,
}

#[derive(clap::Args)]
struct ParseArgs {
    #[arg(long = "changelog")]
    changelogs: Vec<PathBuf>,
    #[arg(long = "commitlog")]
    commitlogs: Vec<PathBuf>,
    #[arg(long)]
    strict: bool,
    /// Output TSV path (default: stdout)
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

#[derive(clap::Args)]
struct SliceArgs {
    /// Commit-log TSV input
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    timeline: Option<PathBuf>,
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    span_start: Option<String>,
    #[arg(long)]
    span_end: Option<String>,
    /// Directory for slices.tsv and slice-<i>.tsv
    #[arg(short = 'o', long)]
    output_dir: PathBuf,
}

#[derive(clap::Args)]
struct GraphArgs {
    /// Commit-log TSV input (typically one slice)
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    affiliations: Option<PathBuf>,
    #[arg(long = "exclude")]
    excludes: Vec<String>,
    #[arg(long)]
    no_default_excludes: bool,
    /// Interval start recorded on the graph (default: data minimum)
    #[arg(long)]
    interval_start: Option<String>,
    /// Interval end, exclusive (default: data maximum + 1s)
    #[arg(long)]
    interval_end: Option<String>,
    #[arg(long)]
    style: Option<PathBuf>,
    /// Output GraphML path
    #[arg(short = 'o', long)]
    output: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricsOutFormat {
    Csv,
    Json,
}

#[derive(clap::Args)]
struct MetricsArgs {
    /// GraphML input
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    format: MetricsOutFormat,
    /// Output path (default: stdout)
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum RenderFormat {
    Svg,
    Dot,
}

#[derive(clap::Args)]
struct RenderArgs {
    /// GraphML input
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum)]
    format: RenderFormat,
    #[arg(long)]
    style: Option<PathBuf>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 500)]
    iterations: usize,
    /// Output path
    #[arg(short = 'o', long)]
    output: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Parse(args) => cmd_parse(args),
        Command::Slice(args) => cmd_slice(args),
        Command::Graph(args) => cmd_graph(args),
        Command::Metrics(args) => cmd_metrics(args),
        Command::Render(args) => cmd_render(args),
    }
}

fn write_output(path: Option<&PathBuf>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(parent)
                    .map_err(|e| CliError::Io(format!("{}: {e}", parent.display())))?;
            }
            fs::write(p, bytes).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))
        }
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

fn cmd_run(args: RunArgs) -> Result<(), CliError> {
    let file_layer = match &args.config {
        Some(path) => {
            let text = String::from_utf8(read_file(path)?)
                .map_err(|_| CliError::Io(format!("{}: not valid UTF-8", path.display())))?;
            ConfigLayer::parse(&text)?
        }
        None => ConfigLayer::default(),
    };
    let flag_layer = ConfigLayer {
        changelogs: args.changelogs,
        commitlogs: args.commitlogs,
        affiliations: args.affiliations,
        timeline: args.timeline,
        preset: args.preset,
        span_start: args.span_start,
        span_end: args.span_end,
        excludes: args.excludes,
        no_default_excludes: args.no_default_excludes.then_some(true),
        output_dir: args.output_dir,
        seed: args.seed,
        style: args.style,
        formats: args.formats,
        strict: args.strict.then_some(true),
        layout_iterations: args.layout_iterations,
        expect_nodes: args.expect_nodes,
        expect_edges: args.expect_edges,
    };
    let cfg: PipelineConfig = file_layer.resolve(flag_layer)?;
    let outcome = run_pipeline(&cfg)?;
    eprintln!(
        "wrote {} artifacts over {} slices to {} ({} nodes, {} edges cumulative)",
        outcome.manifest.len() + 1, // plus the manifest itself
        outcome.slice_count,
        cfg.output_dir.display(),
        outcome.cumulative_nodes,
        outcome.cumulative_edges,
    );
    Ok(())
}

fn cmd_parse(args: ParseArgs) -> Result<(), CliError> {
    if args.changelogs.is_empty() && args.commitlogs.is_empty() {
        return Err(CliError::Config(
            "no inputs: give at least one --changelog or --commitlog".into(),
        ));
    }
    let contribs = parse_inputs(&args.changelogs, &args.commitlogs, args.strict)?;
    write_output(args.output.as_ref(), commitlog_to_string(&contribs).as_bytes())
}

fn cmd_slice(args: SliceArgs) -> Result<(), CliError> {
    if args.timeline.is_some() && args.preset.is_some() {
        return Err(CliError::Config(
            "timeline and preset are mutually exclusive".into(),
        ));
    }
    let bytes = read_file(&args.input)?;
    let (contribs, report) =
        parse_commitlog(&bytes[..]).map_err(|e| CliError::Failure(e.to_string()))?;
    pipeline::report_to_stderr(&args.input, &report);
    let (timeline, preset_span) =
        load_timeline(args.timeline.as_deref(), args.preset.as_deref())?;
    let start = config::parse_span(args.span_start, "span_start")?;
    let end = config::parse_span(args.span_end, "span_end")?;
    let (span_start, span_end) = resolve_span(start, end, preset_span, &contribs);
    let (slices, dropped) = timeline
        .build_slices(span_start, span_end)
        .map_err(|e| CliError::Config(e.to_string()))?;
    for e in &dropped {
        eprintln!(
            "warning: event {} ({}) lies outside the span and was dropped",
            e.date, e.label
        );
    }
    fs::create_dir_all(&args.output_dir)
        .map_err(|e| CliError::Io(format!("{}: {e}", args.output_dir.display())))?;
    write_output(
        Some(&args.output_dir.join("slices.tsv")),
        slices_tsv(&slices).as_bytes(),
    )?;
    for s in &slices {
        write_output(
            Some(&args.output_dir.join(format!("slice-{}.tsv", s.index))),
            slice_tsv(&contribs, s).as_bytes(),
        )?;
        eprintln!("slice {}: {}", s.index, s.label);
    }
    Ok(())
}

fn cmd_graph(args: GraphArgs) -> Result<(), CliError> {
    let bytes = read_file(&args.input)?;
    let (contribs, report) =
        parse_commitlog(&bytes[..]).map_err(|e| CliError::Failure(e.to_string()))?;
    pipeline::report_to_stderr(&args.input, &report);
    let table = load_affiliations(args.affiliations.as_deref())?;
    let style = load_style(args.style.as_deref())?;
    let mut excludes = args.excludes;
    if excludes.is_empty() && !args.no_default_excludes {
        excludes = FileFilter::default_patterns();
    }
    let filter = FileFilter::new(&excludes).map_err(|e| CliError::Config(e.to_string()))?;
    let start = config::parse_span(args.interval_start, "interval_start")?;
    let end = config::parse_span(args.interval_end, "interval_end")?;
    let (inferred_start, inferred_end) = infer_interval(&contribs);
    let slice: Slice = span_slice(start.unwrap_or(inferred_start), end.unwrap_or(inferred_end));
    let graph = project_collaboration(&build_bipartite(&contribs, &slice, &table, &filter));
    eprintln!(
        "graph: {} nodes, {} edges",
        graph.node_count(),
        graph.edge_count()
    );
    write_output(Some(&args.output), &export_graphml(&graph, None, &style))
}

fn cmd_metrics(args: MetricsArgs) -> Result<(), CliError> {
    let bytes = read_file(&args.input)?;
    let graph = import_graphml(&bytes).map_err(|e| CliError::Failure(e.to_string()))?;
    let report = graph_summary(&graph).map_err(|e| CliError::Failure(e.to_string()))?;
    let format = match args.format {
        MetricsOutFormat::Csv => MetricsFormat::Csv,
        MetricsOutFormat::Json => MetricsFormat::Json,
    };
    write_output(args.output.as_ref(), &export_metrics(&report, format))
}

fn cmd_render(args: RenderArgs) -> Result<(), CliError> {
    let bytes = read_file(&args.input)?;
    let graph = import_graphml(&bytes).map_err(|e| CliError::Failure(e.to_string()))?;
    let style = load_style(args.style.as_deref())?;
    let out = match args.format {
        RenderFormat::Dot => export_dot(&graph, &style),
        RenderFormat::Svg => {
            let layout = layout_force_directed(&graph, args.seed, args.iterations);
            export_svg(&graph, &layout, &style).map_err(|e| CliError::Failure(e.to_string()))?
        }
    };
    write_output(Some(&args.output), &out)
}
