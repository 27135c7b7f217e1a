//! The `.cplx` text format.
//!
//! ```text
//! # comment
//! v <id> <x> <y>
//! e <id> <vid> <vid>
//! t <id> <vid> <vid> <vid>
//! ```
//!
//! Lines may appear in any order; ids must be unique within their kind.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::complex::{Complex, ComplexError, Edge, SimplexKind, Triangle, Vertex};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("{line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{}{source}", location_prefix(*.line, *.column))]
    Invalid {
        line: Option<usize>,
        column: Option<usize>,
        source: ComplexError,
    },
}

fn location_prefix(line: Option<usize>, column: Option<usize>) -> String {
    match (line, column) {
        (Some(l), Some(c)) => format!("{l}:{c}: "),
        _ => String::new(),
    }
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push(Token { text: &line[s..i], column: s + 1 });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Token { text: &line[s..], column: s + 1 });
    }
    out
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn parse_u32(line: usize, t: &Token<'_>, what: &str) -> Result<u32, ParseError> {
    t.text
        .parse()
        .map_err(|_| syntax(line, t.column, format!("expected {what}, found `{}`", t.text)))
}

fn parse_f64(line: usize, t: &Token<'_>) -> Result<f64, ParseError> {
    t.text
        .parse()
        .map_err(|_| syntax(line, t.column, format!("expected a number, found `{}`", t.text)))
}

/// Parses and validates a `.cplx` document.
pub fn parse_complex_file(text: &str) -> Result<Complex, ParseError> {
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    let mut triangles = Vec::new();
    // last declaration of each simplex, for locating build errors
    let mut located: HashMap<(SimplexKind, u32), (usize, usize)> = HashMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks = tokens(content);
        let Some(head) = toks.first() else { continue };
        let (kind, arity) = match head.text {
            "v" => (SimplexKind::Vertex, 3),
            "e" => (SimplexKind::Edge, 3),
            "t" => (SimplexKind::Triangle, 4),
            other => return Err(syntax(line, head.column, format!("unknown record `{other}`"))),
        };
        if toks.len() != arity + 1 {
            let col = toks.get(arity + 1).map_or(raw.trim_end().len() + 1, |t| t.column);
            return Err(syntax(
                line,
                col,
                format!("`{}` takes {arity} fields, found {}", head.text, toks.len() - 1),
            ));
        }
        let id = parse_u32(line, &toks[1], "an id")?;
        match kind {
            SimplexKind::Vertex => {
                vertices.push(Vertex::new(id, parse_f64(line, &toks[2])?, parse_f64(line, &toks[3])?));
            }
            SimplexKind::Edge => edges.push(Edge::new(
                id,
                parse_u32(line, &toks[2], "a vertex id")?,
                parse_u32(line, &toks[3], "a vertex id")?,
            )),
            SimplexKind::Triangle => triangles.push(Triangle::new(
                id,
                parse_u32(line, &toks[2], "a vertex id")?,
                parse_u32(line, &toks[3], "a vertex id")?,
                parse_u32(line, &toks[4], "a vertex id")?,
            )),
        }
        located.insert((kind, id), (line, head.column));
    }
    Complex::new(vertices, edges, triangles).map_err(|source| {
        let at = source.simplex().and_then(|s| located.get(&s).copied());
        ParseError::Invalid {
            line: at.map(|a| a.0),
            column: at.map(|a| a.1),
            source,
        }
    })
}

/// Writes a complex in canonical order; parsing the output gives back an
/// equal complex.
pub fn serialize_complex(complex: &Complex) -> String {
    let mut out = String::new();
    for v in complex.vertices() {
        writeln!(out, "v {} {} {}", v.id, v.x, v.y).unwrap();
    }
    for e in complex.edges() {
        writeln!(out, "e {} {} {}", e.id, e.endpoints[0], e.endpoints[1]).unwrap();
    }
    for t in complex.triangles() {
        let [a, b, c] = t.corners;
        writeln!(out, "t {} {a} {b} {c}", t.id).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fixtures_parse() {
        let k = fixtures::fig2();
        assert_eq!((k.num_vertices(), k.num_edges(), k.num_triangles()), (6, 10, 4));
        let t = fixtures::tri();
        assert_eq!((t.num_vertices(), t.num_edges(), t.num_triangles()), (3, 3, 1));
    }

    #[test]
    fn round_trip() {
        for k in [fixtures::tri(), fixtures::fig2(), fixtures::twohole(), fixtures::fig3()] {
            assert_eq!(parse_complex_file(&serialize_complex(&k)).unwrap(), k);
        }
    }

    #[test]
    fn triangle_without_its_edges_is_located() {
        let text = "v 1 0 0\nv 2 1 0\nv 3 0 1\nt 1 1 2 3\ne 1 1 2\ne 2 2 3\n";
        match parse_complex_file(text) {
            Err(ParseError::Invalid {
                line: Some(4),
                column: Some(1),
                source: ComplexError::MissingTriangleEdge { triangle: 1, .. },
            }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn order_is_free() {
        let text = "t 1 1 2 3\ne 3 3 1\ne 2 2 3\ne 1 1 2\nv 3 0 1\nv 2 1 0\nv 1 0 0\n";
        assert_eq!(parse_complex_file(text).unwrap(), fixtures::tri());
    }

    #[test]
    fn syntax_errors_have_columns() {
        assert_eq!(
            parse_complex_file("v 1 0 0\n  v 2 x 0\n"),
            Err(ParseError::Syntax {
                line: 2,
                column: 7,
                message: "expected a number, found `x`".into()
            })
        );
        assert!(matches!(
            parse_complex_file("q 1\n"),
            Err(ParseError::Syntax { line: 1, column: 1, .. })
        ));
        assert!(matches!(
            parse_complex_file("v 1 0 0 # ok\ne 1 1\n"),
            Err(ParseError::Syntax { line: 2, .. })
        ));
    }

    #[test]
    fn duplicate_and_dangling_are_located() {
        let dup = "v 1 0 0\nv 1 1 1\n";
        assert!(matches!(
            parse_complex_file(dup),
            Err(ParseError::Invalid { line: Some(2), .. })
        ));
        let dangling = "v 1 0 0\n\ne 4 1 9\n";
        let err = parse_complex_file(dangling).unwrap_err();
        assert_eq!(err.to_string(), "3:1: edge 4 references unknown vertex 9");
    }

    #[test]
    fn empty_file() {
        assert!(matches!(
            parse_complex_file("# nothing\n"),
            Err(ParseError::Invalid { line: None, source: ComplexError::Empty, .. })
        ));
    }
}
