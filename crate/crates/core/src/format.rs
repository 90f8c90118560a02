//! The `bbd/1` text format and DOT export.
//!
//! ```text
//! # optional comment lines
//! a=2
//! X0 -> Y1
//! Y1 -> X0
//! ```
//!
//! The first non-comment line is the header `a=<integer>`; each following
//! line is one arc. Serialization emits arcs in canonical order with LF line
//! endings, so `parse(serialize(D)) == D` and equal digraphs serialize to
//! identical bytes.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::GraphError;
use crate::graph::{BipartiteDigraph, Side, VertexId};

impl BipartiteDigraph {
    /// Canonical `bbd/1` text.
    pub fn to_bbd(&self) -> String {
        let mut out = format!("a={}\n", self.half_order());
        for (u, v) in self.arcs() {
            let _ = writeln!(out, "{u} -> {v}");
        }
        out
    }

    /// Parses one digraph in `bbd/1` format. Blank lines are ignored.
    pub fn parse_bbd(text: &str) -> Result<Self, GraphError> {
        let mut digraph: Option<BipartiteDigraph> = None;
        for (number, raw) in text.lines().enumerate() {
            let line_no = number + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| GraphError::Parse { line: line_no, message };
            match digraph.as_mut() {
                None => {
                    let value = line
                        .strip_prefix("a=")
                        .ok_or_else(|| err(format!("expected header `a=<integer>`, got {line:?}")))?;
                    let a: usize = value.trim().parse().map_err(|_| err(format!("invalid half-order {value:?}")))?;
                    digraph = Some(BipartiteDigraph::new(a).map_err(|e| err(e.to_string()))?);
                }
                Some(d) => {
                    let (tail, head) = line
                        .split_once("->")
                        .ok_or_else(|| err(format!("expected `<tail> -> <head>`, got {line:?}")))?;
                    let tail: VertexId = tail.parse().map_err(err)?;
                    let head: VertexId = head.parse().map_err(err)?;
                    match d.add_arc(tail, head) {
                        Ok(true) => {}
                        Ok(false) => return Err(err(format!("duplicate arc {tail} -> {head}"))),
                        Err(e) => return Err(err(e.to_string())),
                    }
                }
            }
        }
        digraph.ok_or(GraphError::Parse { line: 0, message: "missing header `a=<integer>`".into() })
    }

    /// Graphviz rendering with the two partite sets on separate ranks.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph D {\n  rankdir=LR;\n");
        for side in [Side::X, Side::Y] {
            out.push_str("  { rank=same;");
            for i in 0..self.half_order() {
                let _ = write!(out, " {};", VertexId::new(side, i));
            }
            out.push_str(" }\n");
        }
        for (u, v) in self.arcs() {
            let _ = writeln!(out, "  {u} -> {v};");
        }
        out.push_str("}\n");
        out
    }
}

impl FromStr for BipartiteDigraph {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BipartiteDigraph::parse_bbd(s)
    }
}

/// Parses a stream of `bbd/1` digraphs separated by blank lines.
pub fn parse_bbd_stream(text: &str) -> Result<Vec<BipartiteDigraph>, GraphError> {
    let mut digraphs = Vec::new();
    let mut chunk = String::new();
    let mut chunk_start = 0;
    let mut flush = |chunk: &mut String, start: usize| -> Result<(), GraphError> {
        if chunk.lines().any(|l| !l.trim().is_empty() && !l.trim().starts_with('#')) {
            let d = BipartiteDigraph::parse_bbd(chunk).map_err(|e| match e {
                GraphError::Parse { line, message } => GraphError::Parse { line: line + start, message },
                other => other,
            })?;
            digraphs.push(d);
        }
        chunk.clear();
        Ok(())
    };
    for (number, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            flush(&mut chunk, chunk_start)?;
            chunk_start = number + 1;
        } else {
            chunk.push_str(line);
            chunk.push('\n');
        }
    }
    flush(&mut chunk, chunk_start)?;
    Ok(digraphs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::VertexId as V;

    #[test]
    fn empty_digraph_is_header_only() {
        let d = BipartiteDigraph::new(2).unwrap();
        assert_eq!(d.to_bbd(), "a=2\n");
        assert_eq!(BipartiteDigraph::parse_bbd("a=2\n").unwrap(), d);
    }

    #[test]
    fn serialization_is_canonical() {
        let d = BipartiteDigraph::parse_bbd("# test\na=2\nY0 -> X1\nX1 -> Y0\n\nX0 -> Y1\n").unwrap();
        assert_eq!(d.to_bbd(), "a=2\nX0 -> Y1\nX1 -> Y0\nY0 -> X1\n");
    }

    #[test]
    fn parse_errors() {
        let cases = [
            ("a=2\nX0 -> X1\n", 2),
            ("a=2\nX0 -> Y2\n", 2),
            ("a=2\nX0 -> Y1\nX0 -> Y1\n", 3),
            ("b=2\n", 1),
            ("a=0\n", 1),
            ("a=2\nX0 Y1\n", 2),
            ("# only a comment\n", 0),
        ];
        for (text, expected_line) in cases {
            match BipartiteDigraph::parse_bbd(text) {
                Err(GraphError::Parse { line, .. }) => assert_eq!(line, expected_line, "{text:?}"),
                other => panic!("{text:?} should fail to parse, got {other:?}"),
            }
        }
    }

    #[test]
    fn stream_splits_on_blank_lines() {
        let text = "a=1\nX0 -> Y0\n\n\na=2\nY1 -> X0\n";
        let ds = parse_bbd_stream(text).unwrap();
        assert_eq!(ds.len(), 2);
        assert!(ds[1].has_arc(V::y(1), V::x(0)));
        let err = parse_bbd_stream("a=1\n\na=1\nX0 -> X0\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 4, .. }));
    }

    #[test]
    fn dot_lists_every_arc() {
        let d = BipartiteDigraph::from_arcs(1, [(V::x(0), V::y(0))]).unwrap();
        assert!(d.to_dot().contains("X0 -> Y0;"));
    }
}
