//! Text formats: graph6, the edge-list format and colouring files.
//!
//! Edge list: a header line `n <vertices>` followed by one `u v` line per
//! edge. Repeated lines give parallel edges. Colouring file: one `u v colour`
//! line per edge in any order. In both, blank lines and lines starting with
//! `#` are ignored.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::colouring::{Colour, EdgeColouring};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, MultiGraph, Vertex};

const HEADER: &str = ">>graph6<<";

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Decodes one graph6 line.
pub fn parse_graph6(line: &str) -> Result<MultiGraph> {
    parse_graph6_at(line, 1)
}

fn parse_graph6_at(line: &str, lineno: usize) -> Result<MultiGraph> {
    let line = line.trim_end_matches(['\n', '\r']);
    let line = line.strip_prefix(HEADER).unwrap_or(line);
    let bytes = line.as_bytes();
    if bytes.is_empty() {
        return Err(Error::parse(lineno, "empty graph6 string"));
    }
    if let Some(&b) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(Error::parse(
            lineno,
            format!("byte {b} is outside the graph6 range"),
        ));
    }
    let value = |b: u8| (b - 63) as usize;
    let (n, body) = if bytes[0] != 126 {
        (value(bytes[0]), &bytes[1..])
    } else if bytes.len() >= 2 && bytes[1] != 126 {
        if bytes.len() < 4 {
            return Err(Error::parse(lineno, "truncated graph6 order"));
        }
        let n = bytes[1..4].iter().fold(0, |acc, &b| acc << 6 | value(b));
        (n, &bytes[4..])
    } else {
        if bytes.len() < 8 {
            return Err(Error::parse(lineno, "truncated graph6 order"));
        }
        let n = bytes[2..8].iter().fold(0, |acc, &b| acc << 6 | value(b));
        (n, &bytes[8..])
    };
    let bits = n * n.saturating_sub(1) / 2;
    let needed = bits.div_ceil(6);
    if body.len() != needed {
        return Err(Error::parse(
            lineno,
            format!(
                "graph6 body has {} bytes, {needed} expected for {n} vertices",
                body.len()
            ),
        ));
    }
    let bit = |k: usize| value(body[k / 6]) >> (5 - k % 6) & 1 == 1;
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bit(k) {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    if (bits..needed * 6).any(bit) {
        return Err(Error::parse(lineno, "graph6 padding bits are not zero"));
    }
    MultiGraph::new(n, &edges)
}

/// Every graph in a graph6 file, one per non-empty line.
pub fn parse_graph6_many(text: &str) -> Result<Vec<MultiGraph>> {
    content_lines(text)
        .map(|(no, l)| parse_graph6_at(l, no))
        .collect()
}

/// Encodes a simple graph; edge ids are not preserved.
pub fn to_graph6(g: &MultiGraph) -> Result<String> {
    if !g.is_simple() {
        return Err(Error::Precondition(
            "graph6 cannot encode parallel edges".into(),
        ));
    }
    let n = g.order();
    let mut out = Vec::new();
    if n < 63 {
        out.push(n as u8 + 63);
    } else if n < 258_048 {
        out.push(126);
        out.extend((0..3).rev().map(|i| (n >> (6 * i) & 63) as u8 + 63));
    } else {
        out.extend([126, 126]);
        out.extend((0..6).rev().map(|i| (n >> (6 * i) & 63) as u8 + 63));
    }
    let mut acc = 0u8;
    let mut count = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | u8::from(g.multiplicity(i, j) > 0);
            count += 1;
            if count == 6 {
                out.push(acc + 63);
                acc = 0;
                count = 0;
            }
        }
    }
    if count > 0 {
        out.push((acc << (6 - count)) + 63);
    }
    Ok(String::from_utf8(out).expect("graph6 is ASCII"))
}

fn parse_number(token: &str, lineno: usize, what: &str) -> Result<usize> {
    token
        .parse()
        .map_err(|_| Error::parse(lineno, format!("{what} `{token}` is not a number")))
}

/// Parses the edge-list format.
pub fn parse_edge_list(text: &str) -> Result<MultiGraph> {
    let mut lines = content_lines(text);
    let (hno, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing `n <vertices>` header"))?;
    let order = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["n", count] => parse_number(count, hno, "vertex count")?,
        _ => return Err(Error::parse(hno, "expected header `n <vertices>`")),
    };
    let mut edges = Vec::new();
    for (no, line) in lines {
        match line.split_whitespace().collect::<Vec<_>>().as_slice() {
            [u, v] => {
                let (u, v) = (
                    parse_number(u, no, "vertex")?,
                    parse_number(v, no, "vertex")?,
                );
                if u == v {
                    return Err(Error::parse(no, format!("loop at vertex {u}")));
                }
                if u >= order || v >= order {
                    return Err(Error::parse(
                        no,
                        format!("vertex {} out of range for {order} vertices", u.max(v)),
                    ));
                }
                edges.push((u, v));
            }
            _ => return Err(Error::parse(no, "expected `u v`")),
        }
    }
    MultiGraph::new(order, &edges)
}

pub fn to_edge_list(g: &MultiGraph) -> String {
    let mut out = format!("n {}\n", g.order());
    for &(u, v) in g.edge_list() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

/// Reads a graph in either format. A first content line containing
/// whitespace means an edge list, anything else is graph6.
pub fn parse_graph(text: &str) -> Result<MultiGraph> {
    let (no, first) = content_lines(text)
        .next()
        .ok_or_else(|| Error::parse(1, "no graph in input"))?;
    if first.contains(char::is_whitespace) {
        parse_edge_list(text)
    } else {
        let rest: Vec<_> = content_lines(text).skip(1).collect();
        if let Some(&(extra, _)) = rest.first() {
            return Err(Error::parse(extra, "more than one graph6 line; use batch"));
        }
        parse_graph6_at(first, no)
    }
}

/// Parses `u v colour` lines. Lines naming the same pair are matched to its
/// parallel edges in increasing id order. The palette is the largest colour
/// used, and at least 3.
pub fn parse_colouring(g: &MultiGraph, text: &str) -> Result<EdgeColouring> {
    let mut pending: BTreeMap<(Vertex, Vertex), Vec<EdgeId>> = BTreeMap::new();
    for e in g.edge_ids() {
        let (u, v) = g.ends(e);
        pending.entry((u.min(v), u.max(v))).or_default().push(e);
    }
    for ids in pending.values_mut() {
        ids.reverse();
    }
    let mut colours = vec![0 as Colour; g.size()];
    for (no, line) in content_lines(text) {
        let [u, v, c] = line.split_whitespace().collect::<Vec<_>>()[..] else {
            return Err(Error::parse(no, "expected `u v colour`"));
        };
        let (u, v) = (
            parse_number(u, no, "vertex")?,
            parse_number(v, no, "vertex")?,
        );
        let c: Colour = c.parse().ok().filter(|&c| c >= 1).ok_or_else(|| {
            Error::parse(
                no,
                format!("colour `{c}` is not a positive integer below 256"),
            )
        })?;
        let e = pending
            .get_mut(&(u.min(v), u.max(v)))
            .and_then(Vec::pop)
            .ok_or_else(|| Error::parse(no, format!("no uncoloured edge {u} {v}")))?;
        colours[e] = c;
    }
    if let Some(e) = colours.iter().position(|&c| c == 0) {
        let (u, v) = g.ends(e);
        return Err(Error::InvalidColouring(format!(
            "edge {u} {v} has no colour"
        )));
    }
    let palette = colours.iter().copied().max().unwrap_or(0).max(3);
    EdgeColouring::new(g, palette, colours)
}

pub fn write_colouring(g: &MultiGraph, c: &EdgeColouring) -> String {
    let mut out = String::new();
    for e in g.edge_ids() {
        let (u, v) = g.ends(e);
        let _ = writeln!(out, "{u} {v} {}", c.colour(e));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::iso::are_isomorphic;
    use crate::graph::named::*;

    #[test]
    fn decodes_k4_by_hand() {
        // 'C' = 4 vertices; '~' = 111111, all six pairs present.
        let g = parse_graph6("C~").unwrap();
        assert_eq!((g.order(), g.size()), (4, 6));
        assert!(are_isomorphic(&g, &complete4()));
        assert_eq!(to_graph6(&g).unwrap(), "C~");
    }

    #[test]
    fn petersen_round_trip() {
        let s = to_graph6(&petersen()).unwrap();
        let g = parse_graph6(&s).unwrap();
        assert_eq!((g.order(), g.size(), g.girth()), (10, 15, Some(5)));
        assert!(are_isomorphic(&g, &petersen()));
        assert_eq!(to_graph6(&g).unwrap(), s);
        assert_eq!(parse_graph6(&format!(">>graph6<<{s}")).unwrap().size(), 15);
    }

    #[test]
    fn empty_graph_and_malformed_input() {
        assert_eq!(parse_graph6("?").unwrap().order(), 0);
        assert!(parse_graph6("C").is_err());
        assert!(parse_graph6("C~~").is_err());
        assert!(parse_graph6("").is_err());
        assert!(parse_graph6("~??").is_err());
        // 'A' = 2 vertices, one bit: '_' = 100000 is the edge, 'A' sets padding.
        assert_eq!(parse_graph6("A_").unwrap().size(), 1);
        assert!(parse_graph6("AA").is_err());
    }

    #[test]
    fn long_orders_round_trip() {
        let g = prism(40);
        let s = to_graph6(&g).unwrap();
        assert!(s.starts_with('~'));
        let h = parse_graph6(&s).unwrap();
        assert_eq!(h.order(), 80);
        assert_eq!(to_graph6(&h).unwrap(), s);
    }

    #[test]
    fn edge_lists() {
        let g = parse_edge_list("n 2\n0 1\n0 1\n0 1\n").unwrap();
        assert_eq!(g.multiplicity(0, 1), 3);
        let k4 = parse_edge_list("# K4\nn 4\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n").unwrap();
        assert_eq!(k4, complete4());
        assert!(matches!(
            parse_edge_list("n 2\n0 0\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(parse_edge_list("n 2\n0 5\n").is_err());
        assert!(parse_edge_list("0 1\n").is_err());
        assert_eq!(
            parse_edge_list(&to_edge_list(&petersen())).unwrap(),
            petersen()
        );
    }

    #[test]
    fn format_detection() {
        assert_eq!(parse_graph("C~\n").unwrap().size(), 6);
        assert_eq!(parse_graph("n 2\n0 1\n1 0\n0 1\n").unwrap().size(), 3);
        assert!(parse_graph("C~\nC~\n").is_err());
    }

    #[test]
    fn colouring_files_are_order_insensitive() {
        let g = triple_edge();
        let c = parse_colouring(&g, "1 0 3\n0 1 1\n0 1 2\n").unwrap();
        assert_eq!(c.colours(), &[3, 1, 2]);
        let k4 = complete4();
        let c = EdgeColouring::new(&k4, 4, vec![1, 2, 3, 3, 4, 1]).unwrap();
        let text = write_colouring(&k4, &c);
        let mut lines: Vec<&str> = text.lines().collect();
        lines.reverse();
        assert_eq!(parse_colouring(&k4, &lines.join("\n")).unwrap(), c);
        assert!(parse_colouring(&k4, "0 1 1\n").is_err());
        assert!(parse_colouring(&g, "0 1 1\n0 1 2\n0 1 3\n0 1 1\n").is_err());
        assert!(parse_colouring(&g, "0 1 1\n0 1 1\n0 1 3\n").is_err());
    }
}
