//! Multi-edge removal and triangle contraction, with colour lifting.
//!
//! Both rewrites take a cubic bridgeless graph on `n` vertices to one on
//! `n − 2` vertices. Lifting a proper 4-edge-colouring back never changes
//! the number of medium edges: every edge whose neighbourhood changes sees
//! the same colour set before and after.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::colouring::{check_proper, class_from_colours, Colour, EdgeClass, EdgeColouring};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, MultiGraph, Vertex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionKind {
    MultiEdge,
    Triangle,
}

/// The local structure of a rewrite site, in original vertex and edge ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Site {
    /// `v1v2` doubled by `parallel`; `spokes[i]` joins `v[i]` to `u[i]`.
    MultiEdge {
        v: [Vertex; 2],
        u: [Vertex; 2],
        parallel: [EdgeId; 2],
        spokes: [EdgeId; 2],
    },
    /// Triangle `v0v1v2`; `sides[i]` joins `v[i]` and `v[i+1]`, `spokes[i]`
    /// leaves `v[i]`. The contracted vertex reuses the slot of `v[0]`.
    Triangle {
        v: [Vertex; 3],
        sides: [EdgeId; 3],
        spokes: [EdgeId; 3],
    },
}

/// Everything needed to lift a colouring of the reduced graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionRecord {
    pub site: Site,
    /// Graph before the rewrite.
    pub original: MultiGraph,
    /// Reduced graph id of each original edge that survives (spokes of a
    /// triangle survive with a new end; spokes of a multi-edge do not).
    pub edge_map: Vec<Option<EdgeId>>,
    /// Reduced graph id of each original vertex, `None` if removed.
    pub vertex_map: Vec<Option<Vertex>>,
    /// Edges of the reduced graph not present in the original.
    pub created: Vec<EdgeId>,
}

impl ReductionRecord {
    pub fn kind(&self) -> ReductionKind {
        match self.site {
            Site::MultiEdge { .. } => ReductionKind::MultiEdge,
            Site::Triangle { .. } => ReductionKind::Triangle,
        }
    }

    pub fn removed_vertices(&self) -> Vec<Vertex> {
        (0..self.vertex_map.len())
            .filter(|&v| self.vertex_map[v].is_none())
            .collect()
    }

    pub fn removed_edges(&self) -> Vec<EdgeId> {
        (0..self.edge_map.len())
            .filter(|&e| self.edge_map[e].is_none())
            .collect()
    }

    /// Lifts raw colours of the reduced graph (one per reduced edge) to the
    /// original graph without checking properness.
    pub fn lift_colours(&self, reduced: &MultiGraph, colours: &[Colour]) -> Vec<Colour> {
        let mut lifted: Vec<Colour> = self
            .edge_map
            .iter()
            .map(|m| m.map_or(0, |f| colours[f]))
            .collect();
        match self.site {
            Site::MultiEdge {
                u,
                parallel,
                spokes,
                ..
            } => {
                let e_new = self.created[0];
                let c_new = colours[e_new];
                let x = self.vertex_map[u[0]].expect("u1 survives");
                let mut others: Vec<Colour> = reduced
                    .incident(x)
                    .iter()
                    .filter(|&&f| f != e_new)
                    .map(|&f| colours[f])
                    .collect();
                others.sort_unstable();
                lifted[spokes[0]] = c_new;
                lifted[spokes[1]] = c_new;
                lifted[parallel[0]] = others[0];
                lifted[parallel[1]] = others[1];
            }
            Site::Triangle { sides, spokes, .. } => {
                for i in 0..3 {
                    let spoke = self.edge_map[spokes[(i + 2) % 3]].expect("spokes survive");
                    lifted[sides[i]] = colours[spoke];
                }
            }
        }
        lifted
    }
}

/// Reduced graph, vertex map, edge map and created edges.
type Rebuilt = (
    MultiGraph,
    Vec<Option<Vertex>>,
    Vec<Option<EdgeId>>,
    Vec<EdgeId>,
);

fn rebuild(
    g: &MultiGraph,
    removed_vertices: &[Vertex],
    removed_edges: &BTreeSet<EdgeId>,
    redirect: impl Fn(Vertex) -> Vertex,
    extra: &[(Vertex, Vertex)],
) -> Result<Rebuilt> {
    let mut vertex_map = vec![None; g.order()];
    let mut next = 0;
    for v in g.vertices() {
        if !removed_vertices.contains(&v) {
            vertex_map[v] = Some(next);
            next += 1;
        }
    }
    let map = |v: Vertex| vertex_map[redirect(v)].expect("endpoint survives");
    let mut edges = Vec::with_capacity(g.size());
    let mut edge_map = vec![None; g.size()];
    for e in g.edge_ids() {
        if removed_edges.contains(&e) {
            continue;
        }
        let (a, b) = g.ends(e);
        edge_map[e] = Some(edges.len());
        edges.push((map(a), map(b)));
    }
    let mut created = Vec::new();
    for &(a, b) in extra {
        created.push(edges.len());
        edges.push((map(a), map(b)));
    }
    let reduced = MultiGraph::new(next, &edges)?;
    reduced
        .validate()
        .map_err(|v| Error::Invariant(format!("reduced graph is invalid: {v}")))?;
    Ok((reduced, vertex_map, edge_map, created))
}

/// Removes the doubled pair `v1 < v2` that is lexicographically smallest and
/// joins its outer neighbours `u1`, `u2` by a new edge. `None` on simple
/// graphs.
pub fn reduce_multi_edge(g: &MultiGraph) -> Result<Option<(MultiGraph, ReductionRecord)>> {
    g.require_valid()?;
    if g.order() == 2 {
        return Err(Error::Precondition(
            "the 2-vertex triple edge is a base case and cannot be reduced".into(),
        ));
    }
    let mut site = None;
    for v1 in g.vertices() {
        let mut partners: Vec<Vertex> = g.neighbours(v1).filter(|&w| w > v1).collect();
        partners.sort_unstable();
        if let Some(&v2) = partners.iter().find(|&&w| g.multiplicity(v1, w) >= 2) {
            site = Some((v1, v2));
            break;
        }
    }
    let Some((v1, v2)) = site else {
        return Ok(None);
    };
    let parallel = g.edges_between(v1, v2);
    if parallel.len() != 2 {
        return Err(Error::Invariant(format!(
            "vertices {v1} and {v2} are joined by {} edges",
            parallel.len()
        )));
    }
    let spoke = |v: Vertex| -> EdgeId {
        *g.incident(v)
            .iter()
            .find(|e| !parallel.contains(e))
            .expect("cubic vertex has a third edge")
    };
    let spokes = [spoke(v1), spoke(v2)];
    let u = [g.other_end(spokes[0], v1), g.other_end(spokes[1], v2)];
    if u[0] == u[1] {
        return Err(Error::Invariant(format!(
            "doubled pair {v1},{v2} hangs off the single vertex {} behind a bridge",
            u[0]
        )));
    }
    let removed: BTreeSet<EdgeId> = parallel.iter().chain(&spokes).copied().collect();
    let (reduced, vertex_map, edge_map, created) =
        rebuild(g, &[v1, v2], &removed, |v| v, &[(u[0], u[1])])?;
    let record = ReductionRecord {
        site: Site::MultiEdge {
            v: [v1, v2],
            u,
            parallel: [parallel[0], parallel[1]],
            spokes,
        },
        original: g.clone(),
        edge_map,
        vertex_map,
        created,
    };
    Ok(Some((reduced, record)))
}

/// The lexicographically smallest sorted vertex triple spanning a triangle.
pub fn find_triangle(g: &MultiGraph) -> Option<[Vertex; 3]> {
    for a in g.vertices() {
        let mut higher: Vec<Vertex> = g.neighbours(a).filter(|&w| w > a).collect();
        higher.sort_unstable();
        higher.dedup();
        for (i, &b) in higher.iter().enumerate() {
            for &c in &higher[i + 1..] {
                if g.multiplicity(b, c) > 0 {
                    return Some([a, b, c]);
                }
            }
        }
    }
    None
}

/// Contracts the lexicographically smallest triangle into one vertex.
/// `None` when `g` is triangle-free.
pub fn reduce_triangle(g: &MultiGraph) -> Result<Option<(MultiGraph, ReductionRecord)>> {
    g.require_valid()?;
    if !g.is_simple() {
        return Err(Error::Precondition(
            "triangle contraction needs a simple graph".into(),
        ));
    }
    let Some(v) = find_triangle(g) else {
        return Ok(None);
    };
    let side = |a: Vertex, b: Vertex| g.edges_between(a, b)[0];
    let sides = [side(v[0], v[1]), side(v[1], v[2]), side(v[2], v[0])];
    let spoke = |x: Vertex| -> EdgeId {
        *g.incident(x)
            .iter()
            .find(|e| !sides.contains(e))
            .expect("cubic vertex has a third edge")
    };
    let spokes = [spoke(v[0]), spoke(v[1]), spoke(v[2])];
    let removed: BTreeSet<EdgeId> = sides.iter().copied().collect();
    let (reduced, vertex_map, edge_map, created) = rebuild(
        g,
        &[v[1], v[2]],
        &removed,
        |x| if v.contains(&x) { v[0] } else { x },
        &[],
    )?;
    let record = ReductionRecord {
        site: Site::Triangle { v, sides, spokes },
        original: g.clone(),
        edge_map,
        vertex_map,
        created,
    };
    Ok(Some((reduced, record)))
}

fn lift_checked(
    record: &ReductionRecord,
    reduced: &MultiGraph,
    c: &EdgeColouring,
) -> Result<EdgeColouring> {
    if c.len() != reduced.size() {
        return Err(Error::InvalidColouring(format!(
            "{} colours for a reduced graph with {} edges",
            c.len(),
            reduced.size()
        )));
    }
    check_proper(reduced, c.colours())?;
    let lifted = record.lift_colours(reduced, c.colours());
    let g = &record.original;
    let out = EdgeColouring::new(g, c.palette(), lifted)
        .map_err(|e| Error::Invariant(format!("lifted colouring rejected: {e}")))?;
    let before = count_medium(reduced, c.colours());
    let after = count_medium(g, out.colours());
    if after > before {
        return Err(Error::Invariant(format!(
            "lift raised the medium count from {before} to {after}"
        )));
    }
    Ok(out)
}

fn count_medium(g: &MultiGraph, colours: &[Colour]) -> usize {
    g.edge_ids()
        .filter(|&e| class_from_colours(g, colours, e) == Some(EdgeClass::Medium))
        .count()
}

/// `c(v_i u_i) = c′(e′)`; the doubled edges take the two other colours at
/// `u1` in increasing order, the lower id getting the smaller colour.
pub fn lift_multi_edge(
    record: &ReductionRecord,
    reduced: &MultiGraph,
    c: &EdgeColouring,
) -> Result<EdgeColouring> {
    if record.kind() != ReductionKind::MultiEdge {
        return Err(Error::Precondition(
            "record is not a multi-edge reduction".into(),
        ));
    }
    lift_checked(record, reduced, c)
}

/// Each triangle side `v_i v_{i+1}` takes the colour of the spoke at
/// `v_{i+2}`.
pub fn lift_triangle(
    record: &ReductionRecord,
    reduced: &MultiGraph,
    c: &EdgeColouring,
) -> Result<EdgeColouring> {
    if record.kind() != ReductionKind::Triangle {
        return Err(Error::Precondition(
            "record is not a triangle contraction".into(),
        ));
    }
    lift_checked(record, reduced, c)
}

/// Dispatches on the record kind.
pub fn lift(
    record: &ReductionRecord,
    reduced: &MultiGraph,
    c: &EdgeColouring,
) -> Result<EdgeColouring> {
    lift_checked(record, reduced, c)
}

/// Outcome of [`check_lift_locally`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LocalLiftCheck {
    /// Colourings of the ball around the site that were lifted.
    pub configurations: usize,
    /// Largest `medium(lifted) − medium(reduced)` over the affected edges.
    pub worst_increase: i64,
    /// Lifts that were not proper on the original graph.
    pub improper: usize,
}

fn ball(
    neighbours: impl Fn(EdgeId) -> Vec<EdgeId>,
    size: usize,
    start: &[EdgeId],
    radius: usize,
) -> Vec<Option<usize>> {
    let mut dist = vec![None; size];
    let mut frontier: Vec<EdgeId> = start.to_vec();
    for &e in start {
        dist[e] = Some(0);
    }
    for d in 1..=radius {
        let mut next = Vec::new();
        for &e in &frontier {
            for f in neighbours(e) {
                if dist[f].is_none() {
                    dist[f] = Some(d);
                    next.push(f);
                }
            }
        }
        frontier = next;
    }
    dist
}

/// Checks a rewrite on every proper 4-colouring of the reduced edges within
/// distance 2 of the site, not just on one colouring.
///
/// Only edges within distance 1 of the site can change class, and their
/// classes depend only on edges within distance 2, so comparing medium counts
/// over the affected edges covers every proper colouring of the whole reduced
/// graph. Colourings are enumerated up to a permutation of the colours, which
/// both lifts respect (the multi-edge lift up to swapping the doubled edges).
pub fn check_lift_locally(
    record: &ReductionRecord,
    reduced: &MultiGraph,
) -> Result<LocalLiftCheck> {
    let g = &record.original;
    let adjacent = |h: &MultiGraph, e: EdgeId| -> Vec<EdgeId> {
        h.adjacent_edges(e)
            .expect("edge exists")
            .adjacent
            .into_iter()
            .collect()
    };
    let (anchors, site_edges): (Vec<EdgeId>, Vec<EdgeId>) = match record.site {
        Site::MultiEdge {
            parallel, spokes, ..
        } => (
            record.created.clone(),
            parallel.iter().chain(&spokes).copied().collect(),
        ),
        Site::Triangle { sides, spokes, .. } => (
            spokes
                .iter()
                .map(|&s| record.edge_map[s].expect("spokes survive"))
                .collect(),
            sides.iter().chain(&spokes).copied().collect(),
        ),
    };
    let red_dist = ball(|e| adjacent(reduced, e), reduced.size(), &anchors, 2);
    let orig_dist = ball(|e| adjacent(g, e), g.size(), &site_edges, 1);

    let mut affected_red: BTreeSet<EdgeId> = reduced
        .edge_ids()
        .filter(|&e| red_dist[e].is_some_and(|d| d <= 1))
        .collect();
    for e in g.edge_ids().filter(|&e| orig_dist[e].is_some()) {
        if let Some(f) = record.edge_map[e] {
            affected_red.insert(f);
        }
    }
    let affected_orig: Vec<EdgeId> = g
        .edge_ids()
        .filter(|&e| record.edge_map[e].is_none_or(|f| affected_red.contains(&f)))
        .collect();
    let affected_red: Vec<EdgeId> = affected_red.into_iter().collect();

    let in_ball = |f: EdgeId| red_dist[f].is_some();
    let covered_red = affected_red
        .iter()
        .all(|&e| in_ball(e) && adjacent(reduced, e).into_iter().all(in_ball));
    let covered_orig = affected_orig.iter().all(|&e| {
        std::iter::once(e)
            .chain(adjacent(g, e))
            .all(|f| record.edge_map[f].is_none_or(in_ball))
    });
    if !covered_red || !covered_orig {
        return Err(Error::Invariant(
            "affected edges depend on colours outside the enumerated ball".into(),
        ));
    }

    let mut order: Vec<EdgeId> = reduced.edge_ids().filter(|&e| in_ball(e)).collect();
    order.sort_by_key(|&e| (red_dist[e], e));
    let mut colours = vec![0 as Colour; reduced.size()];
    let mut result = LocalLiftCheck {
        configurations: 0,
        worst_increase: i64::MIN,
        improper: 0,
    };
    let mut visit = |colours: &[Colour]| {
        let lifted = record.lift_colours(reduced, colours);
        let proper = affected_orig
            .iter()
            .all(|&e| adjacent(g, e).into_iter().all(|f| lifted[f] != lifted[e]));
        let medium = |h: &MultiGraph, cs: &[Colour], edges: &[EdgeId]| {
            edges
                .iter()
                .filter(|&&e| class_from_colours(h, cs, e) == Some(EdgeClass::Medium))
                .count() as i64
        };
        let delta = medium(g, &lifted, &affected_orig) - medium(reduced, colours, &affected_red);
        result.configurations += 1;
        result.worst_increase = result.worst_increase.max(delta);
        result.improper += usize::from(!proper);
    };
    enumerate_ball(reduced, &order, 0, 0, &mut colours, &mut visit);
    Ok(result)
}

fn enumerate_ball(
    h: &MultiGraph,
    order: &[EdgeId],
    depth: usize,
    max_used: Colour,
    colours: &mut Vec<Colour>,
    visit: &mut dyn FnMut(&[Colour]),
) {
    let Some(&e) = order.get(depth) else {
        visit(colours);
        return;
    };
    let (a, b) = h.ends(e);
    for c in 1..=(max_used + 1).min(4) {
        let clash = h
            .incident(a)
            .iter()
            .chain(h.incident(b))
            .any(|&f| f != e && colours[f] == c);
        if !clash {
            colours[e] = c;
            enumerate_ball(h, order, depth + 1, max_used.max(c), colours, visit);
        }
    }
    colours[e] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::iso::are_isomorphic;
    use crate::graph::named::*;

    /// Every proper colouring of `g` with colours `1..=k`.
    fn all_proper_colourings(g: &MultiGraph, k: Colour) -> Vec<Vec<Colour>> {
        fn go(
            g: &MultiGraph,
            k: Colour,
            e: usize,
            cur: &mut Vec<Colour>,
            out: &mut Vec<Vec<Colour>>,
        ) {
            if e == g.size() {
                out.push(cur.clone());
                return;
            }
            let (a, b) = g.ends(e);
            for c in 1..=k {
                let clash = g
                    .incident(a)
                    .iter()
                    .chain(g.incident(b))
                    .any(|&f| f < e && cur[f] == c);
                if !clash {
                    cur[e] = c;
                    go(g, k, e + 1, cur, out);
                }
            }
            cur[e] = 0;
        }
        let mut out = Vec::new();
        go(g, k, 0, &mut vec![0; g.size()], &mut out);
        out
    }

    fn double_square() -> MultiGraph {
        // Doubled pairs 0-1 and 2-3 joined by 0-2 and 1-3.
        MultiGraph::new(4, &[(0, 1), (0, 1), (2, 3), (2, 3), (0, 2), (1, 3)]).unwrap()
    }

    #[test]
    fn simple_graphs_have_no_multi_edge_site() {
        assert!(reduce_multi_edge(&petersen()).unwrap().is_none());
        assert!(reduce_multi_edge(&complete4()).unwrap().is_none());
        assert!(reduce_multi_edge(&triple_edge()).is_err());
    }

    #[test]
    fn double_square_reduces_to_triple_edge() {
        let (h, rec) = reduce_multi_edge(&double_square()).unwrap().unwrap();
        assert_eq!(h.order(), 2);
        assert_eq!(h.multiplicity(0, 1), 3);
        assert_eq!(rec.removed_vertices(), vec![0, 1]);
        assert_eq!(rec.removed_edges(), vec![0, 1, 4, 5]);
        assert_eq!(rec.created, vec![2]);
    }

    #[test]
    fn multi_edge_lift_uses_colours_at_u1() {
        let g = double_square();
        let (h, rec) = reduce_multi_edge(&g).unwrap().unwrap();
        // Reduced edges: 2-3 twice (ids 0, 1) then the new edge (id 2).
        let c = EdgeColouring::new(&h, 4, vec![3, 2, 1]).unwrap();
        let lifted = lift_multi_edge(&rec, &h, &c).unwrap();
        assert_eq!(lifted.colours(), &[2, 3, 3, 2, 1, 1]);
    }

    #[test]
    fn triangle_contractions() {
        let (h, rec) = reduce_triangle(&complete4()).unwrap().unwrap();
        assert!(are_isomorphic(&h, &triple_edge()));
        assert_eq!(rec.kind(), ReductionKind::Triangle);
        let (h, _) = reduce_triangle(&prism(3)).unwrap().unwrap();
        assert_eq!(h.order(), 4);
        assert!(are_isomorphic(&h, &complete4()));
        assert!(reduce_triangle(&petersen()).unwrap().is_none());
    }

    #[test]
    fn triangle_lift_rotates_spoke_colours() {
        let g = complete4();
        let (h, rec) = reduce_triangle(&g).unwrap().unwrap();
        let Site::Triangle { sides, spokes, .. } = rec.site else {
            unreachable!()
        };
        let mut colours = vec![0; 3];
        for (i, &s) in spokes.iter().enumerate() {
            colours[rec.edge_map[s].unwrap()] = i as Colour + 1;
        }
        let c = EdgeColouring::new(&h, 4, colours).unwrap();
        let lifted = lift_triangle(&rec, &h, &c).unwrap();
        assert_eq!(sides.map(|e| lifted.colour(e)), [3, 1, 2]);
    }

    /// Every proper 4-colouring of the reduced graph lifts to a proper
    /// colouring with the same medium count.
    fn exhaust(g: &MultiGraph) {
        let (h, rec) = match reduce_multi_edge(g).unwrap() {
            Some(r) => r,
            None => reduce_triangle(g).unwrap().expect("a reduction applies"),
        };
        let colourings = all_proper_colourings(&h, 4);
        assert!(!colourings.is_empty());
        for colours in colourings {
            let c = EdgeColouring::new(&h, 4, colours.clone()).unwrap();
            let lifted = lift(&rec, &h, &c).unwrap();
            assert_eq!(
                count_medium(g, lifted.colours()),
                count_medium(&h, &colours)
            );
        }
    }

    #[test]
    fn lifts_preserve_properness_and_medium_count_exhaustively() {
        exhaust(&double_square());
        exhaust(&complete4());
        exhaust(&prism(3));
        // Prism with one square replaced by a doubled pair on each side.
        let g = MultiGraph::new(
            6,
            &[
                (0, 1),
                (0, 1),
                (0, 2),
                (1, 3),
                (2, 3),
                (2, 4),
                (3, 5),
                (4, 5),
                (4, 5),
            ],
        )
        .unwrap();
        exhaust(&g);
        // Triangle with three distinct outer neighbours.
        let t = prism(3).relabel(&[5, 4, 3, 2, 1, 0]).unwrap();
        exhaust(&t);
    }

    #[test]
    fn local_check_agrees_with_the_global_one() {
        let g = prism(3).relabel(&[5, 4, 3, 2, 1, 0]).unwrap();
        for g in [double_square(), complete4(), g] {
            let (h, rec) = match reduce_multi_edge(&g).unwrap() {
                Some(r) => r,
                None => reduce_triangle(&g).unwrap().unwrap(),
            };
            let local = check_lift_locally(&rec, &h).unwrap();
            assert!(local.configurations > 0);
            assert_eq!((local.worst_increase, local.improper), (0, 0));
        }
    }

    #[test]
    fn rejects_improper_reduced_colouring() {
        let (h, rec) = reduce_triangle(&complete4()).unwrap().unwrap();
        let c = EdgeColouring::new(&h, 4, vec![1, 2, 3]).unwrap();
        assert!(lift_multi_edge(&rec, &h, &c).is_err());
        let wrong = EdgeColouring::new(&complete4(), 4, vec![1, 2, 3, 3, 2, 1]).unwrap();
        assert!(lift_triangle(&rec, &h, &wrong).is_err());
    }
}
