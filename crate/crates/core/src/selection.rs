//! Edge-selections: subsets `S` of the perfect matching such that
//!
//! 1. every edge of `S` joins two different odd cycles of the 2-factor,
//! 2. every cycle meets at most two edges of `S`, and
//! 3. a cycle meeting two edges of `S` meets them at consecutive vertices.
//!
//! The construction needs a selection of maximum order that, among those,
//! maximises the number of cycles meeting two selected edges. It is found by
//! exact branch-and-bound.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::factor::TwoFactor;
use crate::graph::{EdgeId, MultiGraph, Vertex};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeSelection {
    pub selected: BTreeSet<EdgeId>,
    /// `deg_S(C)` for every cycle index.
    pub degree_of_cycle: Vec<u8>,
}

impl EdgeSelection {
    pub fn len(&self) -> usize {
        self.selected.len()
    }

    pub fn is_empty(&self) -> bool {
        self.selected.is_empty()
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.selected.contains(&e)
    }

    pub fn degree(&self, cycle: usize) -> u8 {
        self.degree_of_cycle[cycle]
    }

    pub fn degree_two_count(&self) -> usize {
        self.degree_of_cycle.iter().filter(|&&d| d == 2).count()
    }

    /// Vertices of `cycle` incident to a selected edge, in increasing
    /// traversal position.
    pub fn attachments(&self, tf: &TwoFactor, cycle: usize) -> Vec<Vertex> {
        tf.cycles[cycle]
            .vertices
            .iter()
            .copied()
            .filter(|&v| self.selected.contains(&tf.matching_edge[v]))
            .collect()
    }

    /// The optimisation key: order first, then the number of degree-2 cycles.
    pub fn key(&self) -> (usize, usize) {
        (self.len(), self.degree_two_count())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    Singleton,
    Path,
    Cycle,
    DoubleEdge,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shape::Singleton => "singleton",
            Shape::Path => "path",
            Shape::Cycle => "cycle",
            Shape::DoubleEdge => "double_edge",
        })
    }
}

/// A maximal set of cycles connected through selected edges, with the shape
/// of its quotient multigraph `G_K`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SComponent {
    pub cycles: BTreeSet<usize>,
    pub associated_edges: BTreeSet<EdgeId>,
    pub shape: Shape,
}

impl SComponent {
    /// `G_K` is a cycle of odd length (at least 3).
    pub fn is_odd_cycle(&self) -> bool {
        self.shape == Shape::Cycle && self.cycles.len() % 2 == 1
    }
}

/// Matching edges joining two distinct odd cycles.
pub fn eligible_edges(g: &MultiGraph, tf: &TwoFactor) -> BTreeSet<EdgeId> {
    tf.matching
        .iter()
        .copied()
        .filter(|&e| {
            let (u, v) = g.ends(e);
            let (cu, cv) = (tf.cycle_of_vertex[u], tf.cycle_of_vertex[v]);
            cu != cv && tf.cycles[cu].is_odd() && tf.cycles[cv].is_odd()
        })
        .collect()
}

/// The endpoint of matching edge `e` on `cycle`, if exactly one end lies there.
pub fn end_on_cycle(g: &MultiGraph, tf: &TwoFactor, e: EdgeId, cycle: usize) -> Option<Vertex> {
    let (u, v) = g.ends(e);
    match (
        tf.cycle_of_vertex[u] == cycle,
        tf.cycle_of_vertex[v] == cycle,
    ) {
        (true, false) => Some(u),
        (false, true) => Some(v),
        _ => None,
    }
}

/// Whether two matching edges meet `cycle` at adjacent vertices of its
/// cyclic order. Both must have exactly one end on the cycle.
pub fn consecutive(
    g: &MultiGraph,
    tf: &TwoFactor,
    e1: EdgeId,
    e2: EdgeId,
    cycle: usize,
) -> Result<bool> {
    if e1 == e2 {
        return Err(Error::Precondition(format!(
            "consecutiveness of edge {e1} with itself"
        )));
    }
    if cycle >= tf.cycles.len() {
        return Err(Error::Precondition(format!("no cycle {cycle}")));
    }
    let mut ends = [0; 2];
    for (slot, e) in ends.iter_mut().zip([e1, e2]) {
        g.check_edge(e)?;
        if !tf.in_matching(e) {
            return Err(Error::Precondition(format!(
                "edge {e} is not a matching edge"
            )));
        }
        *slot = end_on_cycle(g, tf, e, cycle).ok_or_else(|| {
            Error::Precondition(format!(
                "edge {e} does not have exactly one end on cycle {cycle}"
            ))
        })?;
    }
    let c = &tf.cycles[cycle];
    Ok(c.distance(tf.position[ends[0]], tf.position[ends[1]]) == 1)
}

/// Checks the three defining properties; the error names the first failure.
pub fn check_selection(
    g: &MultiGraph,
    tf: &TwoFactor,
    selected: &BTreeSet<EdgeId>,
) -> std::result::Result<(), String> {
    let mut per_cycle: BTreeMap<usize, Vec<EdgeId>> = BTreeMap::new();
    for &e in selected {
        if e >= g.size() || !tf.in_matching(e) {
            return Err(format!("edge {e} is not in the perfect matching"));
        }
        let (u, v) = g.ends(e);
        let (cu, cv) = (tf.cycle_of_vertex[u], tf.cycle_of_vertex[v]);
        if cu == cv {
            return Err(format!("edge {e} is a chord of cycle {cu}"));
        }
        for c in [cu, cv] {
            if !tf.cycles[c].is_odd() {
                return Err(format!("edge {e} meets even cycle {c}"));
            }
            per_cycle.entry(c).or_default().push(e);
        }
    }
    for (&c, edges) in &per_cycle {
        match edges.as_slice() {
            [_] => {}
            &[a, b] => {
                if !consecutive(g, tf, a, b, c).map_err(|e| e.to_string())? {
                    return Err(format!(
                        "edges {a} and {b} are not consecutive on cycle {c}"
                    ));
                }
            }
            _ => return Err(format!("cycle {c} meets {} selected edges", edges.len())),
        }
    }
    Ok(())
}

/// Wraps a set of edges as a selection after checking its properties.
pub fn selection_from_edges(
    g: &MultiGraph,
    tf: &TwoFactor,
    selected: BTreeSet<EdgeId>,
) -> Result<EdgeSelection> {
    check_selection(g, tf, &selected).map_err(Error::Precondition)?;
    let mut degree_of_cycle = vec![0u8; tf.cycles.len()];
    for &e in &selected {
        let (u, v) = g.ends(e);
        degree_of_cycle[tf.cycle_of_vertex[u]] += 1;
        degree_of_cycle[tf.cycle_of_vertex[v]] += 1;
    }
    Ok(EdgeSelection {
        selected,
        degree_of_cycle,
    })
}

/// An optimal edge-selection: maximum order, then the most cycles of
/// degree 2, then the lexicographically smallest sorted edge-id list.
pub fn find_optimal_selection(g: &MultiGraph, tf: &TwoFactor) -> EdgeSelection {
    let candidates: Vec<EdgeId> = eligible_edges(g, tf).into_iter().collect();
    let mut search = SelectionSearch {
        g,
        tf,
        candidates: &candidates,
        degree: vec![0; tf.cycles.len()],
        attached: vec![Vec::new(); tf.cycles.len()],
        chosen: Vec::new(),
        degree_two: 0,
        best: Vec::new(),
        best_key: (0, 0),
    };
    search.run(0);
    let best = search.best.into_iter().collect();
    selection_from_edges(g, tf, best).expect("search only builds valid selections")
}

struct SelectionSearch<'a> {
    g: &'a MultiGraph,
    tf: &'a TwoFactor,
    candidates: &'a [EdgeId],
    degree: Vec<u8>,
    /// Positions on each cycle already taken by selected edges.
    attached: Vec<Vec<usize>>,
    chosen: Vec<EdgeId>,
    degree_two: usize,
    best: Vec<EdgeId>,
    best_key: (usize, usize),
}

impl SelectionSearch<'_> {
    fn run(&mut self, next: usize) {
        let remaining = self.candidates.len() - next;
        let size = self.chosen.len();
        // Each further edge adds one to the order and at most two degree-2
        // cycles.
        if size + remaining < self.best_key.0
            || (size + remaining == self.best_key.0
                && self.degree_two + 2 * remaining < self.best_key.1)
        {
            return;
        }
        if next == self.candidates.len() {
            let key = (size, self.degree_two);
            if key > self.best_key || (key == self.best_key && self.chosen < self.best) {
                self.best_key = key;
                self.best = self.chosen.clone();
            }
            return;
        }
        let e = self.candidates[next];
        let (u, v) = self.g.ends(e);
        let ends = [
            (self.tf.cycle_of_vertex[u], self.tf.position[u]),
            (self.tf.cycle_of_vertex[v], self.tf.position[v]),
        ];
        if ends.iter().all(|&(c, p)| self.fits(c, p)) {
            for &(c, p) in &ends {
                self.degree[c] += 1;
                self.attached[c].push(p);
                if self.degree[c] == 2 {
                    self.degree_two += 1;
                }
            }
            self.chosen.push(e);
            self.run(next + 1);
            self.chosen.pop();
            for &(c, _) in &ends {
                if self.degree[c] == 2 {
                    self.degree_two -= 1;
                }
                self.degree[c] -= 1;
                self.attached[c].pop();
            }
        }
        self.run(next + 1);
    }

    fn fits(&self, cycle: usize, position: usize) -> bool {
        match self.degree[cycle] {
            0 => true,
            1 => self.tf.cycles[cycle].distance(self.attached[cycle][0], position) == 1,
            _ => false,
        }
    }
}

/// Partition of all cycles into S-components, ordered by smallest cycle index.
pub fn s_components(g: &MultiGraph, tf: &TwoFactor, s: &EdgeSelection) -> Vec<SComponent> {
    let k = tf.cycles.len();
    let mut incident: Vec<Vec<(EdgeId, usize)>> = vec![Vec::new(); k];
    for &e in &s.selected {
        let (u, v) = g.ends(e);
        let (cu, cv) = (tf.cycle_of_vertex[u], tf.cycle_of_vertex[v]);
        incident[cu].push((e, cv));
        incident[cv].push((e, cu));
    }
    let mut seen = vec![false; k];
    let mut components = Vec::new();
    for root in 0..k {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut cycles = BTreeSet::from([root]);
        let mut associated_edges = BTreeSet::new();
        let mut queue = VecDeque::from([root]);
        while let Some(c) = queue.pop_front() {
            for &(e, d) in &incident[c] {
                associated_edges.insert(e);
                if !seen[d] {
                    seen[d] = true;
                    cycles.insert(d);
                    queue.push_back(d);
                }
            }
        }
        let shape = match (cycles.len(), associated_edges.len()) {
            (1, _) => Shape::Singleton,
            (2, 2) => Shape::DoubleEdge,
            (n, m) if m + 1 == n => Shape::Path,
            (n, m) if m == n => Shape::Cycle,
            (n, m) => unreachable!(
                "a selection gives every cycle degree at most 2, so a component with {n} cycles cannot have {m} edges"
            ),
        };
        components.push(SComponent {
            cycles,
            associated_edges,
            shape,
        });
    }
    components
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::{enumerate_perfect_matchings, two_factor_from_matching, Matching};
    use crate::graph::named::*;

    fn spokes_factor(k: usize) -> (MultiGraph, TwoFactor) {
        let g = if k == 0 { petersen() } else { prism(k) };
        let n = g.order() / 2;
        let m: Matching = (n..2 * n).collect();
        let tf = two_factor_from_matching(&g, &m).unwrap();
        (g, tf)
    }

    /// Independent oracle: every subset of eligible edges, checked directly.
    fn brute_force(g: &MultiGraph, tf: &TwoFactor) -> BTreeSet<EdgeId> {
        let eligible: Vec<_> = eligible_edges(g, tf).into_iter().collect();
        let mut best: Option<((usize, usize), Vec<EdgeId>)> = None;
        for mask in 0u32..(1 << eligible.len()) {
            let set: Vec<_> = (0..eligible.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| eligible[i])
                .collect();
            let bset: BTreeSet<_> = set.iter().copied().collect();
            if check_selection(g, tf, &bset).is_err() {
                continue;
            }
            let sel = selection_from_edges(g, tf, bset).unwrap();
            let key = sel.key();
            let better = match &best {
                None => true,
                Some((k, s)) => key > *k || (key == *k && set < *s),
            };
            if better {
                best = Some((key, set));
            }
        }
        best.unwrap().1.into_iter().collect()
    }

    #[test]
    fn petersen_eligible_edges_are_the_spokes() {
        let (g, tf) = spokes_factor(0);
        assert_eq!(eligible_edges(&g, &tf), (5..10).collect());
    }

    #[test]
    fn even_cycles_give_no_eligible_edges() {
        let g = complete_bipartite33();
        let m = &enumerate_perfect_matchings(&g, 10).unwrap()[0];
        let tf = two_factor_from_matching(&g, m).unwrap();
        assert!(eligible_edges(&g, &tf).is_empty());
        assert!(find_optimal_selection(&g, &tf).is_empty());
    }

    #[test]
    fn chords_are_not_eligible() {
        // A 7-cycle with chord 0-3 and a 5-cycle joined by five matching edges.
        let mut edges = Vec::new();
        for i in 0..7 {
            edges.push((i, (i + 1) % 7));
        }
        for i in 0..5 {
            edges.push((7 + i, 7 + (i + 1) % 5));
        }
        let chord = edges.len();
        edges.push((0, 3));
        for (a, b) in [(1, 7), (2, 9), (4, 11), (5, 8), (6, 10)] {
            edges.push((a, b));
        }
        let g = MultiGraph::new(12, &edges).unwrap();
        assert!(g.is_cubic());
        let m: Matching = (chord..edges.len()).collect();
        let tf = two_factor_from_matching(&g, &m).unwrap();
        assert_eq!(tf.cycle_lengths(), vec![7, 5]);
        let eligible = eligible_edges(&g, &tf);
        assert!(!eligible.contains(&chord));
        assert_eq!(eligible.len(), 5);
    }

    #[test]
    fn consecutiveness_on_pentagon_and_pentagram() {
        let (g, tf) = spokes_factor(0);
        // Spokes 5 (0-5) and 6 (1-6).
        assert!(consecutive(&g, &tf, 5, 6, 0).unwrap());
        assert!(!consecutive(&g, &tf, 5, 6, 1).unwrap());
        assert!(consecutive(&g, &tf, 5, 7, 1).unwrap());
        assert!(consecutive(&g, &tf, 5, 9, 0).unwrap());
        assert!(consecutive(&g, &tf, 5, 5, 0).is_err());
        assert!(consecutive(&g, &tf, 0, 5, 0).is_err());
    }

    #[test]
    fn petersen_optimum_has_one_edge() {
        let (g, tf) = spokes_factor(0);
        let s = find_optimal_selection(&g, &tf);
        assert_eq!(s.selected, BTreeSet::from([5]));
        assert_eq!(s.selected, brute_force(&g, &tf));
        let comps = s_components(&g, &tf, &s);
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].shape, Shape::Path);
        assert_eq!(comps[0].cycles, BTreeSet::from([0, 1]));
    }

    #[test]
    fn pentagonal_prism_optimum_is_a_double_edge() {
        let (g, tf) = spokes_factor(5);
        let s = find_optimal_selection(&g, &tf);
        assert_eq!(s.key(), (2, 2));
        assert_eq!(s.selected, brute_force(&g, &tf));
        assert_eq!(s.selected, BTreeSet::from([5, 6]));
        let comps = s_components(&g, &tf, &s);
        assert_eq!(comps[0].shape, Shape::DoubleEdge);
    }

    #[test]
    fn empty_selection_gives_singletons() {
        let (g, tf) = spokes_factor(0);
        let s = selection_from_edges(&g, &tf, BTreeSet::new()).unwrap();
        let comps = s_components(&g, &tf, &s);
        assert_eq!(comps.len(), 2);
        assert!(comps.iter().all(|c| c.shape == Shape::Singleton));
    }

    #[test]
    fn invalid_selections_are_rejected() {
        let (g, tf) = spokes_factor(0);
        // Spokes 0-5 and 1-6 are consecutive outside, not inside.
        assert!(check_selection(&g, &tf, &BTreeSet::from([5, 6])).is_err());
        assert!(check_selection(&g, &tf, &BTreeSet::from([0])).is_err());
        assert!(check_selection(&g, &tf, &BTreeSet::from([5, 6, 7])).is_err());
    }
}
