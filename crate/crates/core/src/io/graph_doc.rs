//! Graph documents.
//!
//! The edge-list format names vertices `Class_offset`, one edge per line,
//! after a census header:
//!
//! ```text
//! # classes A:3
//! A_0 A_1
//! A_0 A_2
//! A_1 A_2
//! ```
//!
//! The JSON format carries the same data; DOT is write-only.

use std::fmt::Write as _;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::LabeledGraph;
use crate::instance::ClassLayout;

/// Environment variable naming the default [`GraphFormat`].
pub const FORMAT_ENV: &str = "JDM_FORMAT";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GraphFormat {
    #[default]
    Edges,
    Json,
    Dot,
}

impl FromStr for GraphFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edges" => Ok(GraphFormat::Edges),
            "json" => Ok(GraphFormat::Json),
            "dot" => Ok(GraphFormat::Dot),
            other => Err(Error::UnknownFormat(other.to_string())),
        }
    }
}

impl GraphFormat {
    /// The format named by `JDM_FORMAT`, or edge lists when it is unset.
    pub fn from_env() -> Result<Self> {
        match std::env::var(FORMAT_ENV) {
            Ok(s) if !s.is_empty() => s.parse(),
            _ => Ok(GraphFormat::default()),
        }
    }
}

fn census(layout: &ClassLayout) -> String {
    (0..layout.class_count())
        .map(|c| format!("{}:{}", layout.name(c), layout.size(c)))
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassSize {
    name: String,
    size: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDoc {
    classes: Vec<ClassSize>,
    edges: Vec<(String, String)>,
}

/// Writes `g` in `format`. Output is canonical: edges in sorted order.
pub fn emit_graph(g: &LabeledGraph, format: GraphFormat) -> String {
    let layout = g.layout();
    match format {
        GraphFormat::Edges => {
            let mut out = format!("# classes {}\n", census(layout));
            for (u, v) in g.edges() {
                let _ = writeln!(out, "{} {}", layout.label(u), layout.label(v));
            }
            out
        }
        GraphFormat::Json => {
            let doc = GraphDoc {
                classes: (0..layout.class_count())
                    .map(|c| ClassSize {
                        name: layout.name(c).to_string(),
                        size: layout.size(c),
                    })
                    .collect(),
                edges: g
                    .edges()
                    .map(|(u, v)| (layout.label(u), layout.label(v)))
                    .collect(),
            };
            let mut text = serde_json::to_string_pretty(&doc).expect("graph documents serialize");
            text.push('\n');
            text
        }
        GraphFormat::Dot => {
            let mut out = String::from("graph G {\n");
            for c in 0..layout.class_count() {
                let _ = writeln!(out, "  subgraph \"cluster_{}\" {{", layout.name(c));
                let _ = writeln!(out, "    label=\"{}\";", layout.name(c));
                for v in layout.members(c) {
                    let _ = writeln!(out, "    \"{}\";", layout.label(v));
                }
                out.push_str("  }\n");
            }
            for (u, v) in g.edges() {
                let _ = writeln!(out, "  \"{}\" -- \"{}\";", layout.label(u), layout.label(v));
            }
            out.push_str("}\n");
            out
        }
    }
}

fn vertex(layout: &ClassLayout, label: &str, location: &str) -> Result<usize> {
    let (name, offset) = label
        .rsplit_once('_')
        .ok_or_else(|| Error::parse(location, format!("`{label}` is not of the form Class_offset")))?;
    let class = layout
        .class_by_name(name)
        .ok_or_else(|| Error::parse(location, format!("unknown class `{name}`")))?;
    let offset: usize = offset
        .parse()
        .map_err(|_| Error::parse(location, format!("bad offset in `{label}`")))?;
    if offset >= layout.size(class) {
        return Err(Error::parse(
            location,
            format!("`{label}` is outside class {name} of size {}", layout.size(class)),
        ));
    }
    Ok(layout.members(class).start + offset)
}

fn parse_census(text: &str, location: &str) -> Result<ClassLayout> {
    let mut names = Vec::new();
    let mut sizes = Vec::new();
    for item in text.split_whitespace() {
        let (name, size) = item
            .rsplit_once(':')
            .ok_or_else(|| Error::parse(location, format!("`{item}` is not of the form Name:size")))?;
        let size = size
            .parse()
            .map_err(|_| Error::parse(location, format!("bad size in `{item}`")))?;
        names.push(name.to_string());
        sizes.push(size);
    }
    ClassLayout::with_names(names, sizes).map_err(|e| Error::parse(location, e.to_string()))
}

fn from_edges(layout: ClassLayout, edges: Vec<(usize, usize, String)>) -> Result<LabeledGraph> {
    let mut g = LabeledGraph::empty(Arc::new(layout));
    for (u, v, location) in edges {
        if u == v {
            return Err(Error::parse(location, "self-loop"));
        }
        if !g.insert_edge(u, v) {
            return Err(Error::parse(location, "edge listed twice"));
        }
    }
    Ok(g)
}

/// Reads an edge-list or JSON graph document (JSON when it starts with `{`).
pub fn parse_graph(text: &str) -> Result<LabeledGraph> {
    if text.trim_start().starts_with('{') {
        parse_graph_json(text)
    } else {
        parse_graph_edges(text)
    }
}

fn parse_graph_edges(text: &str) -> Result<LabeledGraph> {
    let mut layout = None;
    let mut edges = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let location = format!("line {}", i + 1);
        let line = line.trim();
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(census) = rest.trim_start().strip_prefix("classes") {
                if layout.is_some() {
                    return Err(Error::parse(location, "second `# classes` header"));
                }
                layout = Some(parse_census(census, &location)?);
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let l = layout
            .as_ref()
            .ok_or_else(|| Error::parse(&location, "edge before the `# classes` header"))?;
        let mut parts = line.split_whitespace();
        let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::parse(location, "expected two vertex labels"));
        };
        let (u, v) = (vertex(l, a, &location)?, vertex(l, b, &location)?);
        edges.push((u, v, location));
    }
    let layout = layout.ok_or_else(|| Error::parse("line 1", "missing `# classes` header"))?;
    from_edges(layout, edges)
}

fn parse_graph_json(text: &str) -> Result<LabeledGraph> {
    let doc: GraphDoc = serde_json::from_str(text).map_err(|e| {
        Error::parse(format!("line {}, column {}", e.line(), e.column()), e.to_string())
    })?;
    let layout = ClassLayout::with_names(
        doc.classes.iter().map(|c| c.name.clone()).collect(),
        doc.classes.iter().map(|c| c.size).collect(),
    )
    .map_err(|e| Error::parse("classes", e.to_string()))?;
    let mut edges = Vec::new();
    for (i, (a, b)) in doc.edges.iter().enumerate() {
        let location = format!("edges[{i}]");
        edges.push((vertex(&layout, a, &location)?, vertex(&layout, b, &location)?, location));
    }
    from_edges(layout, edges)
}
