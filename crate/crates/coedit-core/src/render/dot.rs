//! DOT (Graphviz) export.

use std::fmt::Write as _;

use crate::graph::CollabGraph;

use super::{radii, size_metric_values, StyleMap};

/// Serialize to undirected DOT. Nodes carry the affiliation fill color and
/// a width derived from the styled size metric; edges carry their weight.
pub fn export_dot(g: &CollabGraph, style: &StyleMap) -> Vec<u8> {
    if g.node_count() == 0 {
        return b"graph {\n}\n".to_vec();
    }
    let sizes = size_metric_values(g, style.size_metric);
    let px = radii(&sizes, style.min_px, style.max_px);
    let mut s = String::from("graph {\n");
    s.push_str("  node [shape=circle style=filled fixedsize=true];\n");
    for node in &g.nodes {
        let _ = writeln!(
            s,
            "  n{} [label={} fillcolor=\"{}\" width={:.3}];",
            node.id,
            dot_quote(&node.email),
            style.color_of(&node.affiliation),
            px[node.id] / 24.0,
        );
    }
    for e in &g.edges {
        let _ = writeln!(s, "  n{} -- n{} [weight={}];", e.u, e.v, e.weight);
    }
    s.push_str("}\n");
    s.into_bytes()
}

fn dot_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}
