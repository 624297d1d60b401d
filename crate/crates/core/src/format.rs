//! Text and JSON graph files.
//!
//! Text: optional `v <count>` header, one `e <u> <w> <len>` line per edge,
//! `#` comments. Without a header the vertex count is one more than the
//! largest id mentioned.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, MetrizedGraph};
use crate::scalar::{format_scalar, parse_error, parse_scalar};

pub fn parse_text(text: &str) -> Result<MetrizedGraph> {
    let mut header: Option<usize> = None;
    let mut edges = Vec::new();
    let mut max_id = None::<usize>;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match fields[0] {
            "v" => {
                if fields.len() != 2 {
                    return Err(parse_error(line_no, "expected `v <count>`"));
                }
                if header.is_some() {
                    return Err(parse_error(line_no, "duplicate `v` header"));
                }
                header = Some(fields[1].parse().map_err(|_| parse_error(line_no, "bad vertex count"))?);
            }
            "e" => {
                if fields.len() != 4 {
                    return Err(parse_error(line_no, "expected `e <u> <w> <len>`"));
                }
                let u: usize = fields[1].parse().map_err(|_| parse_error(line_no, "bad vertex id"))?;
                let w: usize = fields[2].parse().map_err(|_| parse_error(line_no, "bad vertex id"))?;
                let len = parse_scalar(fields[3]).map_err(|m| parse_error(line_no, m))?;
                max_id = Some(max_id.unwrap_or(0).max(u).max(w));
                edges.push(Edge::new(u, w, len));
            }
            other => return Err(parse_error(line_no, format!("unknown record `{other}`"))),
        }
    }
    let n = header.unwrap_or_else(|| max_id.map_or(0, |m| m + 1));
    MetrizedGraph::from_edges(n, edges)
}

pub fn write_text(g: &MetrizedGraph) -> String {
    let mut out = format!("v {}\n", g.vertex_count());
    for e in g.edges() {
        out.push_str(&format!("e {} {} {}\n", e.a, e.b, format_scalar(&e.length)));
    }
    out
}

#[derive(Serialize, Deserialize)]
struct JsonGraph {
    vertices: usize,
    edges: Vec<(usize, usize, String)>,
}

pub fn parse_json(text: &str) -> Result<MetrizedGraph> {
    let raw: JsonGraph = serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })?;
    let mut edges = Vec::with_capacity(raw.edges.len());
    for (u, w, l) in raw.edges {
        let len = parse_scalar(&l).map_err(|m| parse_error(0, m))?;
        edges.push(Edge::new(u, w, len));
    }
    MetrizedGraph::from_edges(raw.vertices, edges)
}

pub fn to_json_value(g: &MetrizedGraph) -> serde_json::Value {
    let raw = JsonGraph {
        vertices: g.vertex_count(),
        edges: g.edges().iter().map(|e| (e.a, e.b, format_scalar(&e.length))).collect(),
    };
    serde_json::to_value(raw).expect("plain data serializes")
}

pub fn write_json(g: &MetrizedGraph) -> String {
    to_json_value(g).to_string()
}

/// Picks the parser from the first non-blank character.
pub fn parse_any(text: &str) -> Result<MetrizedGraph> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_text(text)
    }
}
