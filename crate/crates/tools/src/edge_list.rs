//! Plain-text edge lists: one `u v` pair per line.
//!
//! `u u` is a loop and a repeated line adds multiplicity. `#` starts a
//! comment. A line holding a single id declares a vertex; since a live
//! position has no isolated vertices, a declared vertex must also appear in
//! some edge.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use snc_core::{LoopyMultigraph, Vertex};
use thiserror::Error;

/// Largest accepted vertex id.
pub const MAX_VERTEX_ID: u32 = u16::MAX as u32 - 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EdgeListError {
    #[error("line {line}: malformed token '{token}'")]
    Malformed { line: usize, token: String },
    #[error("line {line}: expected 'u v', found {count} tokens")]
    Arity { line: usize, count: usize },
    #[error("line {line}: negative vertex id {id}")]
    Negative { line: usize, id: i64 },
    #[error("line {line}: vertex id {id} exceeds {max}", max = MAX_VERTEX_ID)]
    TooLarge { line: usize, id: i64 },
    #[error("edge list has no edges")]
    NoEdges,
    #[error("line {line}: vertex {id} is declared but has no edges")]
    Isolated { line: usize, id: Vertex },
}

fn parse_id(token: &str, line: usize) -> Result<Vertex, EdgeListError> {
    let id: i64 = token.parse().map_err(|_| EdgeListError::Malformed {
        line,
        token: token.to_string(),
    })?;
    if id < 0 {
        return Err(EdgeListError::Negative { line, id });
    }
    if id > MAX_VERTEX_ID as i64 {
        return Err(EdgeListError::TooLarge { line, id });
    }
    Ok(id as Vertex)
}

pub fn parse_edge_list(text: &str) -> Result<LoopyMultigraph, EdgeListError> {
    let mut g = LoopyMultigraph::new();
    let mut declared: BTreeMap<Vertex, usize> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = body.split_whitespace().collect();
        match tokens.as_slice() {
            [] => {}
            [one] => {
                let v = parse_id(one, line)?;
                declared.entry(v).or_insert(line);
            }
            [a, b] => {
                let u = parse_id(a, line)?;
                let v = parse_id(b, line)?;
                g.add_edge(u, v);
            }
            more => {
                return Err(EdgeListError::Arity {
                    line,
                    count: more.len(),
                })
            }
        }
    }
    if let Some((&id, &line)) = declared.iter().find(|(&v, _)| !g.contains_vertex(v)) {
        return Err(EdgeListError::Isolated { line, id });
    }
    if g.is_empty() {
        return Err(EdgeListError::NoEdges);
    }
    Ok(g)
}

/// Sorted pairs, one line per edge instance, no trailing newline.
pub fn write_edge_list(g: &LoopyMultigraph) -> String {
    let mut out = String::new();
    for e in g.edge_instances() {
        if !out.is_empty() {
            out.push('\n');
        }
        let (u, v) = e.endpoints();
        let _ = write!(out, "{} {}", u, v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use snc_core::{are_isomorphic, generate, FamilySpec};

    #[test]
    fn loop_and_multiplicity() {
        let g = parse_edge_list("0 1\n1 1").unwrap();
        assert_eq!(g.loops(1), 1);
        assert_eq!(g.multiplicity(0, 1), 1);
        assert_eq!(g, generate(&FamilySpec::LoopyStar(1)).unwrap());
        let d = parse_edge_list("0 1\n0 1\n").unwrap();
        assert_eq!(d.multiplicity(0, 1), 2);
    }

    #[test]
    fn comments_and_blanks() {
        let g = parse_edge_list("# triangle\n\n0 1  # first\n1 2\n\t2 0\n").unwrap();
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn errors_name_the_line() {
        assert_eq!(
            parse_edge_list("0 1\nx 2"),
            Err(EdgeListError::Malformed {
                line: 2,
                token: "x".into()
            })
        );
        assert_eq!(parse_edge_list("0 -1"), Err(EdgeListError::Negative { line: 1, id: -1 }));
        assert_eq!(parse_edge_list("0 1 2"), Err(EdgeListError::Arity { line: 1, count: 3 }));
        assert_eq!(parse_edge_list("# nothing\n"), Err(EdgeListError::NoEdges));
        assert_eq!(parse_edge_list(""), Err(EdgeListError::NoEdges));
        assert_eq!(parse_edge_list("0 1\n5\n"), Err(EdgeListError::Isolated { line: 2, id: 5 }));
        assert!(parse_edge_list("1\n0 1\n").is_ok());
        assert!(matches!(parse_edge_list("0 70000"), Err(EdgeListError::TooLarge { .. })));
    }

    #[test]
    fn writes_sorted_pairs() {
        let k3 = generate(&FamilySpec::Complete(3)).unwrap();
        assert_eq!(write_edge_list(&k3), "0 1\n0 2\n1 2");
        assert_eq!(write_edge_list(&LoopyMultigraph::new()), "");
        assert_eq!(parse_edge_list(&write_edge_list(&LoopyMultigraph::new())), Err(EdgeListError::NoEdges));
    }

    #[test]
    fn round_trip() {
        for spec in [
            FamilySpec::Friendship(2),
            FamilySpec::GeneralizedLoopyStar(3, 2),
            FamilySpec::Wheel(5),
            FamilySpec::Petersen,
        ] {
            let g = generate(&spec).unwrap();
            let back = parse_edge_list(&write_edge_list(&g)).unwrap();
            assert_eq!(back, g);
            assert!(are_isomorphic(&back, &g));
        }
    }
}
