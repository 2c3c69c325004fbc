//! Exhaustive lists of small connected bridgeless cubic graphs.
//!
//! Bridgeless cubic multigraphs on `n + 2` vertices are produced from those
//! on `n` by edge insertion: subdivide two edges (or one edge twice) and join
//! the two new vertices. Starting from the triple edge this reaches every
//! loopless bridgeless cubic multigraph; the simple ones form the corpus.
//! Duplicates are rejected by certificate and exact isomorphism.
//!
//! The simple graphs for `n ≤ 14` are shipped in `data/` and available
//! through [`bridgeless_cubic`].

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::iso::{are_isomorphic, certificate};
use crate::graph::named::triple_edge;
use crate::graph::{find_bridges, MultiGraph};
use crate::io::parse_graph6_many;

/// Largest order with a shipped file.
pub const MAX_SHIPPED_ORDER: usize = 14;

const SHIPPED: [(usize, &str); 6] = [
    (4, include_str!("../data/cubic4.g6")),
    (6, include_str!("../data/cubic6.g6")),
    (8, include_str!("../data/cubic8.g6")),
    (10, include_str!("../data/cubic10.g6")),
    (12, include_str!("../data/cubic12.g6")),
    (14, include_str!("../data/cubic14.g6")),
];

pub const PETERSEN_G6: &str = include_str!("../data/petersen.g6");

/// Subdivides edges `e` and `f` (twice if `e == f`) and joins the two new
/// vertices `n` and `n + 1`.
pub fn insert_edge(g: &MultiGraph, e: usize, f: usize) -> MultiGraph {
    let n = g.order();
    let (x, y) = (n, n + 1);
    let mut edges = Vec::with_capacity(g.size() + 3);
    for (id, &(a, b)) in g.edge_list().iter().enumerate() {
        if id == e && id == f {
            edges.extend([(a, x), (x, y), (y, b)]);
        } else if id == e {
            edges.extend([(a, x), (x, b)]);
        } else if id == f {
            edges.extend([(a, y), (y, b)]);
        } else {
            edges.push((a, b));
        }
    }
    edges.push((x, y));
    MultiGraph::new(n + 2, &edges).expect("insertion keeps vertices in range")
}

/// Bridgeless cubic multigraphs on `n + 2` vertices, one per isomorphism
/// class, from the complete list on `n` vertices. With `simple_only`,
/// children with parallel edges are dropped.
pub fn extend(parents: &[MultiGraph], simple_only: bool) -> Vec<MultiGraph> {
    let mut out: Vec<MultiGraph> = Vec::new();
    let mut seen: HashMap<_, Vec<usize>> = HashMap::new();
    for g in parents {
        for e in g.edge_ids() {
            for f in e..g.size() {
                let child = insert_edge(g, e, f);
                if simple_only && !child.is_simple() {
                    continue;
                }
                let bucket = seen.entry(certificate(&child)).or_default();
                if bucket.iter().any(|&i| are_isomorphic(&out[i], &child)) {
                    continue;
                }
                bucket.push(out.len());
                out.push(child);
            }
        }
    }
    out
}

/// All connected bridgeless simple cubic graphs for every even order
/// `4..=max_order`.
pub fn bridgeless_simple_up_to(max_order: usize) -> Vec<(usize, Vec<MultiGraph>)> {
    let mut multi = vec![triple_edge()];
    let mut levels = Vec::new();
    let mut n = 2;
    while n + 2 <= max_order {
        n += 2;
        multi = extend(&multi, n == max_order);
        levels.push((n, multi.iter().filter(|g| g.is_simple()).cloned().collect()));
    }
    levels
}

pub fn is_bridgeless(g: &MultiGraph) -> bool {
    g.is_connected() && find_bridges(g).is_ok_and(|b| b.is_empty())
}

/// The shipped list of connected bridgeless simple cubic graphs on `n`
/// vertices.
pub fn bridgeless_cubic(n: usize) -> Result<Vec<MultiGraph>> {
    let (_, text) = SHIPPED
        .iter()
        .find(|(m, _)| *m == n)
        .ok_or_else(|| Error::Precondition(format!("no shipped corpus for order {n}")))?;
    parse_graph6_many(text)
}

/// Every shipped graph with order at most `max_order`, smallest first.
pub fn bridgeless_cubic_up_to(max_order: usize) -> Result<Vec<MultiGraph>> {
    let mut all = Vec::new();
    for &(n, _) in SHIPPED.iter().filter(|(n, _)| *n <= max_order) {
        all.extend(bridgeless_cubic(n)?);
    }
    Ok(all)
}
