//! Reading and writing graphs (edge-list text format), DOT export, and
//! JSONL trace files.

use std::io::{self, BufRead, Write};

use thiserror::Error;

use crate::dynamics::{MoveRecord, TraceEvent};
use crate::graph::{Graph, GraphError};

/// Errors from parsing and serialization.
#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] io::Error),
    /// A line failed to parse.
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    /// The parsed edges do not form a valid graph.
    #[error(transparent)]
    Graph(#[from] GraphError),
    /// A trace line is not valid JSON.
    #[error("line {line}: {source}")]
    Json {
        line: usize,
        source: serde_json::Error,
    },
}

/// Writes `g` as an edge list: a header line `n m`, then one `u v` line per
/// edge in normalized order.
pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> io::Result<()> {
    writeln!(out, "{} {}", g.n(), g.edge_count())?;
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}

/// Reads the edge-list format written by [`write_edge_list`]. Blank lines
/// and lines starting with `#` are skipped; the declared edge count must
/// match.
pub fn read_edge_list<R: BufRead>(input: R) -> Result<Graph, IoError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        let line_no = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut parts = trimmed.split_whitespace();
        let a: usize = parse_field(&mut parts, line_no)?;
        let b: usize = parse_field(&mut parts, line_no)?;
        if parts.next().is_some() {
            return Err(IoError::Parse {
                line: line_no,
                msg: "expected exactly two fields".to_string(),
            });
        }
        if header.is_none() {
            header = Some((a, b));
        } else {
            edges.push((a, b));
        }
    }
    let (n, m) = header.ok_or(IoError::Parse {
        line: 0,
        msg: "missing `n m` header line".to_string(),
    })?;
    if edges.len() != m {
        return Err(IoError::Parse {
            line: 0,
            msg: format!("header declares {m} edges but {} were given", edges.len()),
        });
    }
    Ok(Graph::new(n, edges)?)
}

fn parse_field<'a, I: Iterator<Item = &'a str>>(
    parts: &mut I,
    line: usize,
) -> Result<usize, IoError> {
    let field = parts.next().ok_or(IoError::Parse {
        line,
        msg: "expected two integers".to_string(),
    })?;
    field.parse().map_err(|_| IoError::Parse {
        line,
        msg: format!("invalid integer {field:?}"),
    })
}

/// Renders `g` in DOT format. When a move is given, its mover is filled and
/// the added edge drawn bold; the removed edge is absent from `g` already.
pub fn to_dot(g: &Graph, highlight: Option<&MoveRecord>) -> String {
    let mut out = String::from("graph state {\n  node [shape=circle];\n");
    if let Some(m) = highlight {
        out.push_str(&format!(
            "  {} [style=filled, fillcolor=lightblue];\n",
            m.mover
        ));
    }
    for (u, v) in g.edges() {
        let styled = highlight.is_some_and(|m| m.added == (u, v));
        if styled {
            out.push_str(&format!("  {u} -- {v} [penwidth=2.4, color=crimson];\n"));
        } else {
            out.push_str(&format!("  {u} -- {v};\n"));
        }
    }
    out.push_str("}\n");
    out
}

/// Writes trace events as JSON Lines, one event per line.
pub fn write_trace<W: Write>(events: &[TraceEvent], mut out: W) -> io::Result<()> {
    for ev in events {
        serde_json::to_writer(&mut out, ev)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Reads a JSONL trace written by [`write_trace`].
pub fn read_trace<R: BufRead>(input: R) -> Result<Vec<TraceEvent>, IoError> {
    let mut events = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let ev = serde_json::from_str(&line).map_err(|source| IoError::Json {
            line: idx + 1,
            source,
        })?;
        events.push(ev);
    }
    Ok(events)
}
