//! SVG 1.1 export: positioned circles sized by the chosen metric, colored
//! by affiliation, with a legend of the organizations present.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::graph::CollabGraph;

use super::{radii, size_metric_values, xml_escape, LayoutResult, RenderError, StyleMap};

const CANVAS: f64 = 800.0;

/// Render the laid-out graph. Fails when the layout does not cover the
/// graph's nodes.
pub fn export_svg(
    g: &CollabGraph,
    layout: &LayoutResult,
    style: &StyleMap,
) -> Result<Vec<u8>, RenderError> {
    if layout.positions.len() != g.node_count() {
        return Err(RenderError::LayoutMismatch {
            expected: g.node_count(),
            got: layout.positions.len(),
        });
    }
    let sizes = size_metric_values(g, style.size_metric);
    let px = radii(&sizes, style.min_px, style.max_px);
    let at = |i: usize| {
        let (x, y) = layout.positions[i];
        (x * CANVAS, y * CANVAS)
    };

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{CANVAS}\" height=\"{CANVAS}\" viewBox=\"0 0 {CANVAS} {CANVAS}\">"
    );
    let _ = writeln!(
        s,
        "  <rect width=\"{CANVAS}\" height=\"{CANVAS}\" fill=\"#FFFFFF\"/>"
    );
    for e in &g.edges {
        let (x1, y1) = at(e.u);
        let (x2, y2) = at(e.v);
        let _ = writeln!(
            s,
            "  <line x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\" stroke=\"#BBBBBB\" stroke-width=\"1\"/>"
        );
    }
    for node in &g.nodes {
        let (cx, cy) = at(node.id);
        let _ = writeln!(
            s,
            "  <circle cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"{:.2}\" fill=\"{}\" stroke=\"#333333\" stroke-width=\"0.5\"><title>{}</title></circle>",
            px[node.id],
            style.color_of(&node.affiliation),
            xml_escape(&node.email),
        );
    }
    for (i, org) in legend_organizations(g, style).iter().enumerate() {
        let y = 18.0 + 18.0 * i as f64;
        let _ = writeln!(
            s,
            "  <rect x=\"10\" y=\"{:.2}\" width=\"12\" height=\"12\" fill=\"{}\"/>",
            y - 10.0,
            style.color_of(org),
        );
        let _ = writeln!(
            s,
            "  <text x=\"28\" y=\"{y:.2}\" font-family=\"sans-serif\" font-size=\"12\">{}</text>",
            xml_escape(org),
        );
    }
    s.push_str("</svg>\n");
    Ok(s.into_bytes())
}

/// Organizations present in the graph: styled organizations first, in
/// palette order, then the rest alphabetically ("other" naturally lands
/// after named organizations).
fn legend_organizations(g: &CollabGraph, style: &StyleMap) -> Vec<String> {
    let present: BTreeSet<&str> = g.nodes.iter().map(|n| n.affiliation.as_str()).collect();
    let mut ordered = Vec::new();
    for (org, _) in style.colors() {
        if present.contains(org.as_str()) {
            ordered.push(org.clone());
        }
    }
    for org in present {
        if !ordered.iter().any(|o| o == org) {
            ordered.push(org.to_string());
        }
    }
    ordered
}
