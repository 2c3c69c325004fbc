//! Loopless multigraphs with stable edge identities.
//!
//! Every downstream structure (matchings, colourings, charge ledgers) is keyed
//! by [`EdgeId`], never by an endpoint pair, because the reductions create and
//! destroy parallel edges.

mod bridges;
pub mod iso;

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

pub use bridges::find_bridges;

pub type Vertex = usize;
pub type EdgeId = usize;

/// A loopless undirected multigraph. Edge ids are dense, `0..size()`, and
/// follow the order in which the edges were supplied.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiGraph {
    order: usize,
    ends: Vec<(Vertex, Vertex)>,
    incidence: Vec<Vec<EdgeId>>,
}

impl MultiGraph {
    /// Builds a multigraph on `order` vertices. Repeated pairs become
    /// parallel edges.
    pub fn new(order: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut incidence = vec![Vec::new(); order];
        for (id, &(u, v)) in edges.iter().enumerate() {
            for w in [u, v] {
                if w >= order {
                    return Err(Error::VertexOutOfRange { vertex: w, order });
                }
            }
            if u == v {
                return Err(Error::Loop(u));
            }
            incidence[u].push(id);
            incidence[v].push(id);
        }
        Ok(MultiGraph {
            order,
            ends: edges.to_vec(),
            incidence,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn size(&self) -> usize {
        self.ends.len()
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.order
    }

    pub fn edge_ids(&self) -> std::ops::Range<EdgeId> {
        0..self.ends.len()
    }

    /// Endpoints of `e` in the order they were given.
    pub fn ends(&self, e: EdgeId) -> (Vertex, Vertex) {
        self.ends[e]
    }

    pub fn edge_list(&self) -> &[(Vertex, Vertex)] {
        &self.ends
    }

    pub fn check_edge(&self, e: EdgeId) -> Result<()> {
        if e < self.ends.len() {
            Ok(())
        } else {
            Err(Error::InvalidEdge(e))
        }
    }

    /// The endpoint of `e` that is not `v`.
    pub fn other_end(&self, e: EdgeId, v: Vertex) -> Vertex {
        let (a, b) = self.ends[e];
        debug_assert!(a == v || b == v, "vertex {v} is not an end of edge {e}");
        if a == v {
            b
        } else {
            a
        }
    }

    pub fn is_incident(&self, e: EdgeId, v: Vertex) -> bool {
        let (a, b) = self.ends[e];
        a == v || b == v
    }

    /// Edge ids incident to `v`, in increasing order.
    pub fn incident(&self, v: Vertex) -> &[EdgeId] {
        &self.incidence[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.incidence[v].len()
    }

    /// Neighbours of `v` with multiplicity, in edge-id order.
    pub fn neighbours(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.incidence[v].iter().map(move |&e| self.other_end(e, v))
    }

    /// Number of edges joining `u` and `v`.
    pub fn multiplicity(&self, u: Vertex, v: Vertex) -> usize {
        self.incidence[u]
            .iter()
            .filter(|&&e| self.other_end(e, u) == v)
            .count()
    }

    /// Edges joining `u` and `v`, in increasing id order.
    pub fn edges_between(&self, u: Vertex, v: Vertex) -> Vec<EdgeId> {
        self.incidence[u]
            .iter()
            .copied()
            .filter(|&e| self.other_end(e, u) == v)
            .collect()
    }

    /// True when two distinct edges share an endpoint.
    pub fn edges_adjacent(&self, e: EdgeId, f: EdgeId) -> bool {
        if e == f {
            return false;
        }
        let (a, b) = self.ends[e];
        self.is_incident(f, a) || self.is_incident(f, b)
    }

    pub fn is_cubic(&self) -> bool {
        self.incidence.iter().all(|inc| inc.len() == 3)
    }

    pub fn is_simple(&self) -> bool {
        self.vertices()
            .all(|v| self.neighbours(v).collect::<BTreeSet<_>>().len() == self.degree(v))
    }

    /// Number of connected components.
    pub fn component_count(&self) -> usize {
        let mut seen = vec![false; self.order];
        let mut count = 0;
        for s in self.vertices() {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for w in self.neighbours(v) {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        count
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// The set 𝓔(e) of edges sharing at least one endpoint with `e`.
    pub fn adjacent_edges(&self, e: EdgeId) -> Result<EdgeNeighbourhood> {
        self.check_edge(e)?;
        let (a, b) = self.ends[e];
        let adjacent = self.incidence[a]
            .iter()
            .chain(&self.incidence[b])
            .copied()
            .filter(|&f| f != e)
            .collect();
        Ok(EdgeNeighbourhood { edge: e, adjacent })
    }

    /// Length of a shortest cycle; parallel edges count as 2-cycles.
    /// `None` for forests.
    pub fn girth(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for s in self.vertices() {
            // BFS tree rooted at s; a non-tree edge closes a cycle through s of
            // length at most dist[u] + dist[v] + 1, and the minimum over all
            // roots is exact.
            let mut dist = vec![usize::MAX; self.order];
            let mut via = vec![usize::MAX; self.order];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &e in &self.incidence[v] {
                    if e == via[v] {
                        continue;
                    }
                    let w = self.other_end(e, v);
                    if dist[w] == usize::MAX {
                        dist[w] = dist[v] + 1;
                        via[w] = e;
                        queue.push_back(w);
                    } else {
                        let len = dist[v] + dist[w] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    /// The image of the graph under the vertex permutation `perm`
    /// (`v ↦ perm[v]`). Edge ids are preserved.
    pub fn relabel(&self, perm: &[Vertex]) -> Result<Self> {
        if perm.len() != self.order {
            return Err(Error::Precondition(format!(
                "permutation of length {} for a graph on {} vertices",
                perm.len(),
                self.order
            )));
        }
        let edges: Vec<_> = self.ends.iter().map(|&(u, v)| (perm[u], perm[v])).collect();
        MultiGraph::new(self.order, &edges)
    }

    /// Accepts the graph iff it is a non-empty, connected, bridgeless cubic
    /// multigraph; otherwise names the first violated property.
    pub fn validate(&self) -> std::result::Result<(), Violation> {
        if self.order == 0 {
            return Err(Violation::Empty);
        }
        if let Some(v) = self.vertices().find(|&v| self.degree(v) != 3) {
            return Err(Violation::NotCubic {
                vertex: v,
                degree: self.degree(v),
            });
        }
        let components = self.component_count();
        if components > 1 {
            return Err(Violation::Disconnected { components });
        }
        let bridges = find_bridges(self).expect("connectivity checked above");
        if let Some(&edge) = bridges.iter().next() {
            return Err(Violation::Bridge { edge });
        }
        Ok(())
    }

    pub fn require_valid(&self) -> Result<()> {
        self.validate().map_err(Error::InvalidGraph)
    }
}

/// Convenience for `MultiGraph::new`.
pub fn build_graph(order: usize, edges: &[(Vertex, Vertex)]) -> Result<MultiGraph> {
    MultiGraph::new(order, edges)
}

/// 𝓔(e): the edges sharing an endpoint with `edge`, excluding `edge` itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeNeighbourhood {
    pub edge: EdgeId,
    pub adjacent: BTreeSet<EdgeId>,
}

/// The first property a candidate input fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum Violation {
    Empty,
    NotCubic { vertex: Vertex, degree: usize },
    Disconnected { components: usize },
    Bridge { edge: EdgeId },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Empty => write!(f, "not cubic: the graph has no vertices"),
            Violation::NotCubic { vertex, degree } => {
                write!(f, "not cubic: vertex {vertex} has degree {degree}")
            }
            Violation::Disconnected { components } => {
                write!(f, "disconnected: {components} components")
            }
            Violation::Bridge { edge } => write!(f, "edge {edge} is a bridge"),
        }
    }
}

/// Small graphs used throughout the tests and the CLI.
pub mod named {
    use super::MultiGraph;

    pub fn complete4() -> MultiGraph {
        MultiGraph::new(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    /// Two vertices joined by three parallel edges.
    pub fn triple_edge() -> MultiGraph {
        MultiGraph::new(2, &[(0, 1), (0, 1), (0, 1)]).unwrap()
    }

    /// K_{3,3} with parts {0,1,2} and {3,4,5}.
    pub fn complete_bipartite33() -> MultiGraph {
        let mut edges = Vec::new();
        for a in 0..3 {
            for b in 3..6 {
                edges.push((a, b));
            }
        }
        MultiGraph::new(6, &edges).unwrap()
    }

    /// Outer cycle 0..4, spokes i–i+5, inner pentagram i+5 – (i+2 mod 5)+5.
    pub fn petersen() -> MultiGraph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
        }
        for i in 0..5 {
            edges.push((i, i + 5));
        }
        for i in 0..5 {
            edges.push((i + 5, (i + 2) % 5 + 5));
        }
        MultiGraph::new(10, &edges).unwrap()
    }

    /// The prism over an `k`-cycle: outer 0..k, inner k..2k, spokes i–i+k.
    pub fn prism(k: usize) -> MultiGraph {
        let mut edges = Vec::new();
        for i in 0..k {
            edges.push((i, (i + 1) % k));
        }
        for i in 0..k {
            edges.push((i, i + k));
        }
        for i in 0..k {
            edges.push((i + k, (i + 1) % k + k));
        }
        MultiGraph::new(2 * k, &edges).unwrap()
    }

    /// The flower snark J_k (k odd): centres a_i joined to b_i, c_i, d_i;
    /// the b_i form a k-cycle and the c_i, d_i form one 2k-cycle.
    pub fn flower_snark(k: usize) -> MultiGraph {
        let a = |i: usize| 4 * i;
        let b = |i: usize| 4 * i + 1;
        let c = |i: usize| 4 * i + 2;
        let d = |i: usize| 4 * i + 3;
        let mut edges = Vec::new();
        for i in 0..k {
            let j = (i + 1) % k;
            edges.push((a(i), b(i)));
            edges.push((a(i), c(i)));
            edges.push((a(i), d(i)));
            edges.push((b(i), b(j)));
            if j == 0 {
                edges.push((c(i), d(0)));
                edges.push((d(i), c(0)));
            } else {
                edges.push((c(i), c(j)));
                edges.push((d(i), d(j)));
            }
        }
        MultiGraph::new(4 * k, &edges).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::named::*;
    use super::*;

    #[test]
    fn builds_complete_graph_and_triple_edge() {
        let k4 = complete4();
        assert_eq!((k4.order(), k4.size()), (4, 6));
        assert!(k4.is_cubic() && k4.is_simple());

        let theta = triple_edge();
        assert_eq!((theta.order(), theta.size()), (2, 3));
        assert!(theta.is_cubic());
        assert!(!theta.is_simple());
    }

    #[test]
    fn rejects_loops_and_out_of_range_endpoints() {
        assert_eq!(
            MultiGraph::new(2, &[(0, 0), (0, 1), (1, 1)]),
            Err(Error::Loop(0))
        );
        assert_eq!(
            MultiGraph::new(2, &[(0, 2)]),
            Err(Error::VertexOutOfRange {
                vertex: 2,
                order: 2
            })
        );
    }

    #[test]
    fn adjacent_edges_in_simple_and_multi_graphs() {
        let p = petersen();
        for e in p.edge_ids() {
            assert_eq!(p.adjacent_edges(e).unwrap().adjacent.len(), 4);
        }
        let theta = triple_edge();
        assert_eq!(
            theta.adjacent_edges(0).unwrap().adjacent,
            BTreeSet::from([1, 2])
        );
        assert_eq!(p.adjacent_edges(15), Err(Error::InvalidEdge(15)));
    }

    #[test]
    fn adjacent_edges_at_a_double_edge() {
        // v1 = 0, v2 = 1 joined by edges 0 and 1; v1u1 = 0-2 (edge 2),
        // v2u2 = 1-3 (edge 3); u1 and u2 joined by a double edge.
        let g = MultiGraph::new(4, &[(0, 1), (0, 1), (0, 2), (1, 3), (2, 3), (2, 3)]).unwrap();
        assert!(g.is_cubic());
        assert_eq!(
            g.adjacent_edges(0).unwrap().adjacent,
            BTreeSet::from([1, 2, 3])
        );
    }

    #[test]
    fn validation_names_the_first_violation() {
        assert_eq!(petersen().validate(), Ok(()));
        assert_eq!(triple_edge().validate(), Ok(()));
        let c6 = MultiGraph::new(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
        assert_eq!(
            c6.validate(),
            Err(Violation::NotCubic {
                vertex: 0,
                degree: 2
            })
        );
        assert_eq!(
            MultiGraph::new(0, &[]).unwrap().validate(),
            Err(Violation::Empty)
        );
        let two_k4 = MultiGraph::new(
            8,
            &[
                (0, 1),
                (0, 2),
                (0, 3),
                (1, 2),
                (1, 3),
                (2, 3),
                (4, 5),
                (4, 6),
                (4, 7),
                (5, 6),
                (5, 7),
                (6, 7),
            ],
        )
        .unwrap();
        assert_eq!(
            two_k4.validate(),
            Err(Violation::Disconnected { components: 2 })
        );
    }

    #[test]
    fn girth_of_named_graphs() {
        assert_eq!(complete4().girth(), Some(3));
        assert_eq!(complete_bipartite33().girth(), Some(4));
        assert_eq!(petersen().girth(), Some(5));
        assert_eq!(prism(5).girth(), Some(4));
        assert_eq!(triple_edge().girth(), Some(2));
        assert_eq!(flower_snark(5).girth(), Some(5));
    }

    #[test]
    fn flower_snark_is_cubic_and_bridgeless() {
        let j5 = flower_snark(5);
        assert_eq!(j5.order(), 20);
        assert!(j5.is_simple());
        assert_eq!(j5.validate(), Ok(()));
    }
}
