//! Perfect matchings and the 2-factors they leave behind.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, MultiGraph, Vertex};

/// A perfect matching as a set of edge ids. `BTreeSet` orders matchings
/// lexicographically by their sorted ids.
pub type Matching = BTreeSet<EdgeId>;

/// Default number of perfect matchings examined when choosing a 2-factor.
pub const DEFAULT_MATCHING_CAP: usize = 10_000;

/// One cycle of a 2-factor, in its fixed traversal order: `edges[i]` joins
/// `vertices[i]` and `vertices[(i + 1) % len]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cycle {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<EdgeId>,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_odd(&self) -> bool {
        self.len() % 2 == 1
    }

    /// The vertex at cyclic position `i`.
    pub fn at(&self, i: usize) -> Vertex {
        self.vertices[i % self.len()]
    }

    /// The cycle edge leaving position `i` in traversal direction.
    pub fn edge_after(&self, i: usize) -> EdgeId {
        self.edges[i % self.len()]
    }

    /// The cycle edge entering position `i`.
    pub fn edge_before(&self, i: usize) -> EdgeId {
        self.edges[(i + self.len() - 1) % self.len()]
    }

    /// Cyclic distance between two positions.
    pub fn distance(&self, i: usize, j: usize) -> usize {
        let d = i.abs_diff(j) % self.len();
        d.min(self.len() - d)
    }
}

/// A perfect matching `M` together with the cycles of `F = G − M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoFactor {
    pub matching: Matching,
    pub cycles: Vec<Cycle>,
    /// `C_v`: index into `cycles` of the cycle through each vertex.
    pub cycle_of_vertex: Vec<usize>,
    /// Position of each vertex within its cycle's traversal order.
    pub position: Vec<usize>,
    /// `v′`: the other end of the matching edge at each vertex.
    pub partner: Vec<Vertex>,
    /// The matching edge at each vertex.
    pub matching_edge: Vec<EdgeId>,
}

impl TwoFactor {
    pub fn cycle_of(&self, v: Vertex) -> &Cycle {
        &self.cycles[self.cycle_of_vertex[v]]
    }

    pub fn cycle_lengths(&self) -> Vec<usize> {
        self.cycles.iter().map(Cycle::len).collect()
    }

    pub fn odd_cycle_count(&self) -> usize {
        self.cycles.iter().filter(|c| c.is_odd()).count()
    }

    pub fn in_matching(&self, e: EdgeId) -> bool {
        self.matching.contains(&e)
    }

    /// Cycle index of the cycle containing edge `e`, if `e` is a cycle edge.
    pub fn cycle_of_edge(&self, g: &MultiGraph, e: EdgeId) -> Option<usize> {
        if self.in_matching(e) {
            None
        } else {
            Some(self.cycle_of_vertex[g.ends(e).0])
        }
    }

    /// True when the matching edge `e` has both ends on one cycle.
    pub fn is_chord(&self, g: &MultiGraph, e: EdgeId) -> bool {
        let (u, v) = g.ends(e);
        self.in_matching(e) && self.cycle_of_vertex[u] == self.cycle_of_vertex[v]
    }
}

/// Perfect matchings of `g` in lexicographic order of their sorted edge ids.
///
/// Backtracking always covers the lowest uncovered vertex next and branches
/// over its incident edges, so each matching is produced exactly once. If more
/// than `limit` exist, the first `limit` found are returned, sorted.
pub fn enumerate_perfect_matchings(g: &MultiGraph, limit: usize) -> Result<Vec<Matching>> {
    if limit == 0 {
        return Err(Error::InvalidLimit);
    }
    let mut found = Vec::new();
    if g.order().is_multiple_of(2) {
        let mut covered = vec![false; g.order()];
        let mut chosen = Vec::with_capacity(g.order() / 2);
        extend_matching(g, limit, &mut covered, &mut chosen, &mut found);
    }
    found.sort();
    Ok(found)
}

fn extend_matching(
    g: &MultiGraph,
    limit: usize,
    covered: &mut [bool],
    chosen: &mut Vec<EdgeId>,
    found: &mut Vec<Matching>,
) {
    if found.len() >= limit {
        return;
    }
    let Some(v) = covered.iter().position(|&c| !c) else {
        found.push(chosen.iter().copied().collect());
        return;
    };
    covered[v] = true;
    for &e in g.incident(v) {
        let w = g.other_end(e, v);
        if covered[w] {
            continue;
        }
        covered[w] = true;
        chosen.push(e);
        extend_matching(g, limit, covered, chosen, found);
        chosen.pop();
        covered[w] = false;
    }
    covered[v] = false;
}

/// Splits a cubic multigraph along a perfect matching into `M` and the cycles
/// of `G − M`.
///
/// Each cycle starts at its smallest vertex and proceeds towards the smaller
/// of that vertex's two cycle neighbours (smaller edge id for a 2-cycle).
pub fn two_factor_from_matching(g: &MultiGraph, m: &Matching) -> Result<TwoFactor> {
    let n = g.order();
    let mut partner = vec![usize::MAX; n];
    let mut matching_edge = vec![usize::MAX; n];
    for &e in m {
        g.check_edge(e)?;
        let (u, v) = g.ends(e);
        for (a, b) in [(u, v), (v, u)] {
            if partner[a] != usize::MAX {
                return Err(Error::NotPerfectMatching(format!(
                    "vertex {a} is covered twice"
                )));
            }
            partner[a] = b;
            matching_edge[a] = e;
        }
    }
    if let Some(v) = partner.iter().position(|&p| p == usize::MAX) {
        return Err(Error::NotPerfectMatching(format!(
            "vertex {v} is uncovered"
        )));
    }

    let mut rest: Vec<Vec<EdgeId>> = vec![Vec::new(); n];
    for v in g.vertices() {
        rest[v] = g
            .incident(v)
            .iter()
            .copied()
            .filter(|e| !m.contains(e))
            .collect();
        if rest[v].len() != 2 {
            return Err(Error::Precondition(format!(
                "vertex {v} has degree {} outside the matching; a 2-factor needs a cubic graph",
                rest[v].len()
            )));
        }
    }

    let mut cycle_of_vertex = vec![usize::MAX; n];
    let mut position = vec![usize::MAX; n];
    let mut cycles = Vec::new();
    for start in g.vertices() {
        if cycle_of_vertex[start] != usize::MAX {
            continue;
        }
        let index = cycles.len();
        let [e1, e2] = [rest[start][0], rest[start][1]];
        let (w1, w2) = (g.other_end(e1, start), g.other_end(e2, start));
        let first = if (w1, e1) <= (w2, e2) { e1 } else { e2 };

        let mut vertices = vec![start];
        let mut edges = vec![first];
        cycle_of_vertex[start] = index;
        position[start] = 0;
        let mut v = g.other_end(first, start);
        let mut via = first;
        while v != start {
            cycle_of_vertex[v] = index;
            position[v] = vertices.len();
            vertices.push(v);
            let next = if rest[v][0] == via {
                rest[v][1]
            } else {
                rest[v][0]
            };
            edges.push(next);
            v = g.other_end(next, v);
            via = next;
        }
        cycles.push(Cycle { vertices, edges });
    }

    Ok(TwoFactor {
        matching: m.clone(),
        cycles,
        cycle_of_vertex,
        position,
        partner,
        matching_edge,
    })
}

/// The 2-factor the construction starts from: the first enumerated one with a
/// cycle whose length differs from 5, or the first one if none has.
pub fn choose_two_factor(g: &MultiGraph, cap: usize) -> Result<TwoFactor> {
    let matchings = enumerate_perfect_matchings(g, cap)?;
    let mut first = None;
    for m in &matchings {
        let tf = two_factor_from_matching(g, m)?;
        if tf.cycles.iter().any(|c| c.len() != 5) {
            return Ok(tf);
        }
        first.get_or_insert(tf);
    }
    first.ok_or_else(|| Error::NotPerfectMatching("the graph has no perfect matching".into()))
}
