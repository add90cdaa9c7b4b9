//! Deterministic layout and export of collaboration graphs.
//!
//! Visual conventions: node color keys the developer's organization (with
//! gray for "other"), node size follows the configured centrality metric.
//! Every exporter emits a deterministic byte stream for identical inputs:
//! nodes in ascending id order, edges in lexicographic (u, v) order.

mod dot;
mod graphml;
mod layout;
mod svg;

pub use dot::export_dot;
pub use graphml::{export_graphml, import_graphml};
pub use layout::{layout_force_directed, LayoutResult};
pub use svg::export_svg;

use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::CollabGraph;
use crate::metrics::{
    betweenness_centrality, degree_centrality, eigenvector_centrality, MetricsReport,
    DEFAULT_MAX_ITER, DEFAULT_TOLERANCE,
};

/// Fixed fill color for the "other" affiliation.
pub const OTHER_COLOR: &str = "#808080";

/// Errors from styling, layout application, and import.
#[derive(Debug, Error)]
pub enum RenderError {
    #[error("style line {line}: {reason}")]
    Style { line: usize, reason: String },
    #[error("layout carries {got} positions for {expected} nodes")]
    LayoutMismatch { expected: usize, got: usize },
    #[error("graphml import: {0}")]
    Import(String),
}

/// Which per-node metric drives node size.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SizeMetric {
    Degree,
    Eigenvector,
    Betweenness,
}

impl SizeMetric {
    /// The configuration keyword for this metric.
    pub fn as_str(self) -> &'static str {
        match self {
            SizeMetric::Degree => "degree",
            SizeMetric::Eigenvector => "eigenvector",
            SizeMetric::Betweenness => "betweenness",
        }
    }
}

impl FromStr for SizeMetric {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "degree" => Ok(SizeMetric::Degree),
            "eigenvector" => Ok(SizeMetric::Eigenvector),
            "betweenness" => Ok(SizeMetric::Betweenness),
            other => Err(format!(
                "unknown size metric {other:?} (expected degree, eigenvector, or betweenness)"
            )),
        }
    }
}

/// Organization colors plus node-size configuration.
#[derive(Debug, Clone)]
pub struct StyleMap {
    colors: Vec<(String, String)>,
    pub size_metric: SizeMetric,
    pub min_px: f64,
    pub max_px: f64,
}

impl StyleMap {
    /// The built-in palette: one distinct hue per organization of the
    /// default affiliation table, Nokia in blue, "other" in gray.
    pub fn default_preset() -> Self {
        let colors = [
            ("Apple", "#D62728"),
            ("Google", "#2CA02C"),
            ("Nokia", "#1F77B4"),
            ("RIM", "#9467BD"),
            ("Igalia", "#8C564B"),
            ("Intel", "#17BECF"),
            ("Samsung", "#E377C2"),
            ("Univ. Szeged", "#BCBD22"),
            ("Adobe", "#FF7F0E"),
            ("Torch Mobile", "#FFD700"),
        ];
        StyleMap {
            colors: colors
                .iter()
                .map(|(o, c)| (o.to_string(), c.to_string()))
                .collect(),
            size_metric: SizeMetric::Degree,
            min_px: 4.0,
            max_px: 24.0,
        }
    }

    /// Parse the `Organization = #RRGGBB` style file. Recognized setting
    /// keys: `size_metric`, `size_min`, `size_max`. `#` comments only at
    /// line start (color values contain `#`).
    pub fn parse(text: &str) -> Result<Self, RenderError> {
        let mut style = StyleMap {
            colors: Vec::new(),
            size_metric: SizeMetric::Degree,
            min_px: 4.0,
            max_px: 24.0,
        };
        for (idx, raw_line) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw_line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (key, value) = trimmed.split_once('=').ok_or(RenderError::Style {
                line,
                reason: format!("expected \"key = value\", got {trimmed:?}"),
            })?;
            let key = key.trim();
            let value = value.trim();
            match key {
                "size_metric" => {
                    style.size_metric =
                        value.parse().map_err(|reason| RenderError::Style { line, reason })?;
                }
                "size_min" => {
                    style.min_px = parse_px(value, line)?;
                }
                "size_max" => {
                    style.max_px = parse_px(value, line)?;
                }
                "other" => {
                    return Err(RenderError::Style {
                        line,
                        reason: format!("the \"other\" color is fixed at {OTHER_COLOR}"),
                    });
                }
                org => {
                    if !valid_hex_color(value) {
                        return Err(RenderError::Style {
                            line,
                            reason: format!("expected #RRGGBB color, got {value:?}"),
                        });
                    }
                    if style.colors.iter().any(|(o, _)| o == org) {
                        return Err(RenderError::Style {
                            line,
                            reason: format!("duplicate organization {org:?}"),
                        });
                    }
                    style
                        .colors
                        .push((org.to_string(), value.to_uppercase()));
                }
            }
        }
        if style.min_px >= style.max_px {
            return Err(RenderError::Style {
                line: 0,
                reason: format!(
                    "size_min ({}) must be below size_max ({})",
                    style.min_px, style.max_px
                ),
            });
        }
        Ok(style)
    }

    /// Fill color for an organization; unknown names fall back to gray.
    pub fn color_of(&self, org: &str) -> &str {
        self.colors
            .iter()
            .find(|(o, _)| o == org)
            .map(|(_, c)| c.as_str())
            .unwrap_or(OTHER_COLOR)
    }

    /// The configured organization colors, in file order.
    pub fn colors(&self) -> &[(String, String)] {
        &self.colors
    }
}

impl Default for StyleMap {
    fn default() -> Self {
        StyleMap::default_preset()
    }
}

fn parse_px(value: &str, line: usize) -> Result<f64, RenderError> {
    let px: f64 = value.parse().map_err(|_| RenderError::Style {
        line,
        reason: format!("expected a number, got {value:?}"),
    })?;
    if !px.is_finite() || px <= 0.0 {
        return Err(RenderError::Style {
            line,
            reason: format!("size {value:?} must be positive"),
        });
    }
    Ok(px)
}

fn valid_hex_color(s: &str) -> bool {
    s.len() == 7
        && s.starts_with('#')
        && s[1..].chars().all(|c| c.is_ascii_hexdigit())
}

/// Per-node values of the configured size metric.
///
/// Degree and betweenness are infallible; if eigenvector centrality fails
/// to converge, exporters fall back to all-zero values (every node renders
/// at the constant-metric midpoint size).
pub(crate) fn size_metric_values(g: &CollabGraph, metric: SizeMetric) -> Vec<f64> {
    match metric {
        SizeMetric::Degree => degree_centrality(g).0.iter().map(|&d| d as f64).collect(),
        SizeMetric::Betweenness => betweenness_centrality(g, false),
        SizeMetric::Eigenvector => eigenvector_centrality(g, DEFAULT_TOLERANCE, DEFAULT_MAX_ITER)
            .unwrap_or_else(|_| vec![0.0; g.node_count()]),
    }
}

/// Affine map from metric values to pixel radii; a constant metric maps
/// every node to the midpoint of the size range.
pub(crate) fn radii(values: &[f64], min_px: f64, max_px: f64) -> Vec<f64> {
    if values.is_empty() {
        return Vec::new();
    }
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if hi - lo <= f64::EPSILON * hi.abs().max(1.0) {
        return vec![(min_px + max_px) / 2.0; values.len()];
    }
    values
        .iter()
        .map(|&v| min_px + (v - lo) / (hi - lo) * (max_px - min_px))
        .collect()
}

/// Minimal XML/SVG text escaping.
pub(crate) fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

/// Output format for [`export_metrics`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricsFormat {
    Csv,
    Json,
}

/// Fixed CSV header for metrics reports.
pub const METRICS_CSV_HEADER: &str =
    "id,email,affiliation,degree,degree_centrality,betweenness,betweenness_normalized,eigenvector,clustering";

/// Serialize a metrics report: CSV with the fixed header and field order,
/// or a JSON document mirroring the report type.
pub fn export_metrics(report: &MetricsReport, format: MetricsFormat) -> Vec<u8> {
    match format {
        MetricsFormat::Json => {
            let mut bytes =
                serde_json::to_vec_pretty(report).expect("report serialization cannot fail");
            bytes.push(b'\n');
            bytes
        }
        MetricsFormat::Csv => {
            let mut out = String::new();
            out.push_str(METRICS_CSV_HEADER);
            out.push('\n');
            for row in &report.nodes {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{}",
                    row.id,
                    csv_field(&row.email),
                    csv_field(&row.affiliation),
                    row.degree,
                    row.degree_centrality,
                    row.betweenness,
                    row.betweenness_normalized,
                    row.eigenvector,
                    row.clustering,
                );
            }
            out.into_bytes()
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::graph_summary;
    use crate::synth::graph_from_edges;
    use proptest::prelude::*;

    #[test]
    fn style_parse_and_lookup() {
        let style = StyleMap::parse(
            "# palette\nNokia = #1f77b4\nsize_metric = eigenvector\nsize_min = 5\nsize_max = 30\n",
        )
        .unwrap();
        assert_eq!(style.color_of("Nokia"), "#1F77B4");
        assert_eq!(style.color_of("other"), OTHER_COLOR);
        assert_eq!(style.color_of("Unknown Corp"), OTHER_COLOR);
        assert_eq!(style.size_metric, SizeMetric::Eigenvector);
        assert_eq!((style.min_px, style.max_px), (5.0, 30.0));
    }

    #[test]
    fn style_rejects_bad_color_and_metric() {
        assert!(StyleMap::parse("Nokia = blue\n").is_err());
        assert!(StyleMap::parse("size_metric = pagerank\n").is_err());
        assert!(StyleMap::parse("size_min = 30\nsize_max = 5\n").is_err());
        assert!(StyleMap::parse("other = #000000\n").is_err());
    }

    #[test]
    fn default_palette_covers_ten_organizations() {
        let style = StyleMap::default_preset();
        assert_eq!(style.colors().len(), 10);
        assert_eq!(style.color_of("Nokia"), "#1F77B4");
        let mut seen: Vec<&str> = style.colors().iter().map(|(_, c)| c.as_str()).collect();
        seen.sort_unstable();
        seen.dedup();
        assert_eq!(seen.len(), 10, "colors are distinct");
    }

    #[test]
    fn metrics_csv_empty_report_is_header_only() {
        let report = graph_summary(&graph_from_edges(0, &[])).unwrap();
        let csv = export_metrics(&report, MetricsFormat::Csv);
        let text = String::from_utf8(csv).unwrap();
        assert_eq!(text, format!("{METRICS_CSV_HEADER}\n"));
    }

    #[test]
    fn metrics_csv_one_node_is_two_lines() {
        let report = graph_summary(&graph_from_edges(1, &[])).unwrap();
        let csv = export_metrics(&report, MetricsFormat::Csv);
        let text = String::from_utf8(csv).unwrap();
        assert_eq!(text.lines().count(), 2);
    }

    #[test]
    fn csv_and_json_carry_identical_values() {
        let g = crate::synth::random_graph(7, 0.5, 3);
        let report = graph_summary(&g).unwrap();
        let csv = String::from_utf8(export_metrics(&report, MetricsFormat::Csv)).unwrap();
        let json: serde_json::Value =
            serde_json::from_slice(&export_metrics(&report, MetricsFormat::Json)).unwrap();
        let rows: Vec<&str> = csv.lines().skip(1).collect();
        let json_nodes = json["nodes"].as_array().unwrap();
        assert_eq!(rows.len(), json_nodes.len());
        for (row, node) in rows.iter().zip(json_nodes) {
            let fields: Vec<&str> = row.split(',').collect();
            assert_eq!(
                fields[0].parse::<u64>().unwrap(),
                node["id"].as_u64().unwrap()
            );
            assert_eq!(fields[1], node["email"].as_str().unwrap());
            for (i, key) in [
                (4, "degree_centrality"),
                (5, "betweenness"),
                (6, "betweenness_normalized"),
                (7, "eigenvector"),
                (8, "clustering"),
            ] {
                assert_eq!(
                    fields[i].parse::<f64>().unwrap(),
                    node[key].as_f64().unwrap(),
                    "field {key}"
                );
            }
        }
    }

    proptest! {
        #[test]
        fn radii_are_monotone_in_the_metric(values in proptest::collection::vec(0.0f64..100.0, 1..20)) {
            let r = radii(&values, 4.0, 24.0);
            for i in 0..values.len() {
                prop_assert!(r[i] >= 4.0 - 1e-12 && r[i] <= 24.0 + 1e-12);
                for j in 0..values.len() {
                    if values[i] > values[j] {
                        prop_assert!(r[i] >= r[j]);
                    }
                    if values[i] == values[j] {
                        prop_assert!((r[i] - r[j]).abs() < 1e-12);
                    }
                }
            }
        }
    }
}
