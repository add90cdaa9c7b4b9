//! GraphML export and import.
//!
//! The writer emits a fixed, deterministic document: keys first, then the
//! graph's interval, then nodes in id order and edges in (u, v) order. The
//! reader accepts exactly that attribute vocabulary (matching on
//! `attr.name`, not key ids) and rebuilds an equal [`CollabGraph`].

use std::collections::HashMap;
use std::fmt::Write as _;

use quick_xml::events::Event;
use quick_xml::Reader;

use crate::affiliation::Developer;
use crate::changelog::{format_timestamp, parse_timestamp};
use crate::graph::{CollabGraph, Edge};

use super::{size_metric_values, xml_escape, LayoutResult, RenderError, StyleMap};

/// Serialize to GraphML. Node attributes: email, affiliation, the styled
/// size-metric value, and (when a layout is given) x/y positions. Edge
/// attribute: weight. The interval rides on the graph element.
pub fn export_graphml(
    g: &CollabGraph,
    layout: Option<&LayoutResult>,
    style: &StyleMap,
) -> Vec<u8> {
    if let Some(l) = layout {
        assert_eq!(
            l.positions.len(),
            g.node_count(),
            "layout does not cover the graph"
        );
    }
    let sizes = size_metric_values(g, style.size_metric);
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    s.push_str("<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n");
    s.push_str("  <key id=\"d0\" for=\"node\" attr.name=\"email\" attr.type=\"string\"/>\n");
    s.push_str("  <key id=\"d1\" for=\"node\" attr.name=\"affiliation\" attr.type=\"string\"/>\n");
    s.push_str("  <key id=\"d2\" for=\"node\" attr.name=\"size\" attr.type=\"double\"/>\n");
    s.push_str("  <key id=\"d3\" for=\"edge\" attr.name=\"weight\" attr.type=\"long\"/>\n");
    s.push_str(
        "  <key id=\"d4\" for=\"graph\" attr.name=\"interval_start\" attr.type=\"string\"/>\n",
    );
    s.push_str(
        "  <key id=\"d5\" for=\"graph\" attr.name=\"interval_end\" attr.type=\"string\"/>\n",
    );
    if layout.is_some() {
        s.push_str("  <key id=\"d6\" for=\"node\" attr.name=\"x\" attr.type=\"double\"/>\n");
        s.push_str("  <key id=\"d7\" for=\"node\" attr.name=\"y\" attr.type=\"double\"/>\n");
    }
    s.push_str("  <graph id=\"G\" edgedefault=\"undirected\">\n");
    let _ = writeln!(
        s,
        "    <data key=\"d4\">{}</data>",
        format_timestamp(g.interval.0)
    );
    let _ = writeln!(
        s,
        "    <data key=\"d5\">{}</data>",
        format_timestamp(g.interval.1)
    );
    for node in &g.nodes {
        let _ = writeln!(s, "    <node id=\"n{}\">", node.id);
        let _ = writeln!(
            s,
            "      <data key=\"d0\">{}</data>",
            xml_escape(&node.email)
        );
        let _ = writeln!(
            s,
            "      <data key=\"d1\">{}</data>",
            xml_escape(&node.affiliation)
        );
        let _ = writeln!(s, "      <data key=\"d2\">{}</data>", sizes[node.id]);
        if let Some(l) = layout {
            let (x, y) = l.positions[node.id];
            let _ = writeln!(s, "      <data key=\"d6\">{x:.6}</data>");
            let _ = writeln!(s, "      <data key=\"d7\">{y:.6}</data>");
        }
        s.push_str("    </node>\n");
    }
    for (i, e) in g.edges.iter().enumerate() {
        let _ = writeln!(
            s,
            "    <edge id=\"e{}\" source=\"n{}\" target=\"n{}\">",
            i, e.u, e.v
        );
        let _ = writeln!(s, "      <data key=\"d3\">{}</data>", e.weight);
        s.push_str("    </edge>\n");
    }
    s.push_str("  </graph>\n");
    s.push_str("</graphml>\n");
    s.into_bytes()
}

#[derive(Default)]
struct PendingNode {
    xml_id: String,
    email: Option<String>,
    affiliation: Option<String>,
}

#[derive(Default)]
struct PendingEdge {
    source: String,
    target: String,
    weight: Option<u32>,
}

enum Ctx {
    None,
    Graph,
    Node,
    Edge,
}

/// Rebuild a [`CollabGraph`] from GraphML produced by [`export_graphml`].
pub fn import_graphml(bytes: &[u8]) -> Result<CollabGraph, RenderError> {
    let mut reader = Reader::from_reader(bytes);
    reader.config_mut().trim_text(true);
    let mut buf = Vec::new();

    let mut key_names: HashMap<String, String> = HashMap::new();
    let mut nodes: Vec<PendingNode> = Vec::new();
    let mut edges: Vec<PendingEdge> = Vec::new();
    let mut interval_start = None;
    let mut interval_end = None;
    let mut ctx = Ctx::None;
    let mut data_key: Option<String> = None;

    let attr = |e: &quick_xml::events::BytesStart, name: &[u8]| -> Result<Option<String>, RenderError> {
        for a in e.attributes() {
            let a = a.map_err(|err| RenderError::Import(err.to_string()))?;
            if a.key.as_ref() == name {
                let v = a
                    .unescape_value()
                    .map_err(|err| RenderError::Import(err.to_string()))?;
                return Ok(Some(v.into_owned()));
            }
        }
        Ok(None)
    };

    loop {
        let event = reader
            .read_event_into(&mut buf)
            .map_err(|e| RenderError::Import(format!("malformed XML: {e}")))?;
        match event {
            Event::Start(ref e) | Event::Empty(ref e) => {
                let is_empty = matches!(event, Event::Empty(_));
                match e.name().as_ref() {
                    b"key" => {
                        let id = attr(e, b"id")?
                            .ok_or_else(|| RenderError::Import("key without id".into()))?;
                        let name = attr(e, b"attr.name")?
                            .ok_or_else(|| RenderError::Import("key without attr.name".into()))?;
                        key_names.insert(id, name);
                    }
                    b"graph" => ctx = Ctx::Graph,
                    b"node" => {
                        let id = attr(e, b"id")?
                            .ok_or_else(|| RenderError::Import("node without id".into()))?;
                        nodes.push(PendingNode {
                            xml_id: id,
                            ..PendingNode::default()
                        });
                        if !is_empty {
                            ctx = Ctx::Node;
                        }
                    }
                    b"edge" => {
                        let source = attr(e, b"source")?
                            .ok_or_else(|| RenderError::Import("edge without source".into()))?;
                        let target = attr(e, b"target")?
                            .ok_or_else(|| RenderError::Import("edge without target".into()))?;
                        edges.push(PendingEdge {
                            source,
                            target,
                            weight: None,
                        });
                        if !is_empty {
                            ctx = Ctx::Edge;
                        }
                    }
                    b"data" if !is_empty => {
                        data_key = attr(e, b"key")?;
                    }
                    _ => {}
                }
            }
            Event::Text(t) => {
                let Some(key_id) = &data_key else { continue };
                let Some(name) = key_names.get(key_id) else {
                    continue;
                };
                let text = t
                    .unescape()
                    .map_err(|e| RenderError::Import(e.to_string()))?
                    .into_owned();
                match (&ctx, name.as_str()) {
                    (Ctx::Node, "email") => {
                        nodes.last_mut().expect("inside node").email = Some(text);
                    }
                    (Ctx::Node, "affiliation") => {
                        nodes.last_mut().expect("inside node").affiliation = Some(text);
                    }
                    (Ctx::Edge, "weight") => {
                        let w = text.parse::<u32>().map_err(|_| {
                            RenderError::Import(format!("bad edge weight {text:?}"))
                        })?;
                        edges.last_mut().expect("inside edge").weight = Some(w);
                    }
                    (Ctx::Graph, "interval_start") => {
                        interval_start = Some(parse_timestamp(&text).ok_or_else(|| {
                            RenderError::Import(format!("bad interval_start {text:?}"))
                        })?);
                    }
                    (Ctx::Graph, "interval_end") => {
                        interval_end = Some(parse_timestamp(&text).ok_or_else(|| {
                            RenderError::Import(format!("bad interval_end {text:?}"))
                        })?);
                    }
                    _ => {}
                }
            }
            Event::End(ref e) => match e.name().as_ref() {
                b"node" | b"edge" => ctx = Ctx::Graph,
                b"data" => data_key = None,
                _ => {}
            },
            Event::Eof => break,
            _ => {}
        }
        buf.clear();
    }

    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut developers = Vec::with_capacity(nodes.len());
    for (idx, pending) in nodes.into_iter().enumerate() {
        let email = pending
            .email
            .ok_or_else(|| RenderError::Import(format!("node {} has no email", pending.xml_id)))?;
        let affiliation = pending.affiliation.ok_or_else(|| {
            RenderError::Import(format!("node {} has no affiliation", pending.xml_id))
        })?;
        ids.insert(pending.xml_id, idx);
        developers.push(Developer {
            id: idx,
            email,
            affiliation,
        });
    }
    let mut built = Vec::with_capacity(edges.len());
    for pending in edges {
        let u = *ids
            .get(&pending.source)
            .ok_or_else(|| RenderError::Import(format!("unknown endpoint {}", pending.source)))?;
        let v = *ids
            .get(&pending.target)
            .ok_or_else(|| RenderError::Import(format!("unknown endpoint {}", pending.target)))?;
        let weight = pending
            .weight
            .ok_or_else(|| RenderError::Import("edge without weight".into()))?;
        built.push(Edge {
            u: u.min(v),
            v: u.max(v),
            weight,
        });
    }
    built.sort_unstable_by_key(|e| (e.u, e.v));
    let interval = (
        interval_start.ok_or_else(|| RenderError::Import("missing interval_start".into()))?,
        interval_end.ok_or_else(|| RenderError::Import("missing interval_end".into()))?,
    );
    Ok(CollabGraph {
        nodes: developers,
        edges: built,
        interval,
    })
}
