//! Plain-text edge lists.
//!
//! One `u v` pair per line with 0-based node indices. Lines starting with `#`
//! are comments. An optional `n <count>` header fixes the node count;
//! otherwise it is the largest index plus one.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub fn parse(text: &str) -> Result<Graph> {
    let mut declared_n: Option<usize> = None;
    let mut pairs = Vec::new();
    let mut max_index: Option<usize> = None;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        if fields[0] == "n" {
            if fields.len() != 2 || declared_n.is_some() || !pairs.is_empty() {
                return Err(err("node-count header must be a single `n <count>` before any edge".into()));
            }
            declared_n = Some(fields[1].parse().map_err(|_| err(format!("bad node count `{}`", fields[1])))?);
            continue;
        }
        if fields.len() != 2 {
            return Err(err(format!("expected `u v`, found {} fields", fields.len())));
        }
        let u: usize = fields[0].parse().map_err(|_| err(format!("bad node index `{}`", fields[0])))?;
        let v: usize = fields[1].parse().map_err(|_| err(format!("bad node index `{}`", fields[1])))?;
        if u == v {
            return Err(err(format!("self-loop on node {u}")));
        }
        if let Some(n) = declared_n {
            if u.max(v) >= n {
                return Err(err(format!("node index {} out of range for n = {n}", u.max(v))));
            }
        }
        max_index = Some(max_index.map_or(u.max(v), |m| m.max(u).max(v)));
        pairs.push((u, v));
    }
    let n = declared_n.unwrap_or_else(|| max_index.map_or(0, |m| m + 1));
    Graph::from_edge_list(n, &pairs)
}

pub fn read(path: &Path) -> Result<Graph> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse(&text)
}

/// Serializes with an `n` header so isolated trailing nodes survive a round trip.
pub fn to_string(g: &Graph, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    let _ = writeln!(out, "n {}", g.n());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn write(path: &Path, g: &Graph, comments: &[String]) -> Result<()> {
    std::fs::write(path, to_string(g, comments)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_with_and_without_header() {
        let g = parse("# path\n0 1\n1 2\n").unwrap();
        assert_eq!((g.n(), g.m()), (3, 2));
        let g = parse("n 5\n0 1\n").unwrap();
        assert_eq!((g.n(), g.m()), (5, 1));
        assert_eq!(parse("").unwrap().n(), 0);
    }

    #[test]
    fn self_loop_reports_line() {
        match parse("0 1\n# c\n2 2\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_garbage() {
        assert!(matches!(parse("0 x\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse("0 1 2\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse("n 2\n0 2\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn round_trip_keeps_isolated_nodes() {
        let g = Graph::from_edge_list(6, &[(0, 3), (1, 2)]).unwrap();
        let back = parse(&to_string(&g, &["seed 1".into()])).unwrap();
        assert_eq!(back, g);
    }
}
