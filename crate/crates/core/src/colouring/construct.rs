//! The 4-edge-colouring built from a 2-factor and an optimal edge-selection.
//!
//! Matching edges get colour 4. Even cycles alternate 1 and 2. Every odd
//! cycle has exactly one edge of colour 3, adjacent to all selected edges at
//! that cycle, and the remaining path alternates 1 and 2. The only freedom
//! left is the phase of each path, which decides whether a selected edge is
//! poor (both flanking path ends equal) or medium.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use super::{class_from_colours, Colour, EdgeClass, EdgeColouring};
use crate::error::{Error, Result};
use crate::factor::TwoFactor;
use crate::graph::{EdgeId, MultiGraph, Vertex};
use crate::selection::{check_selection, s_components, EdgeSelection, Shape};

pub const COLOUR_ODD: Colour = 3;
pub const COLOUR_MATCHING: Colour = 4;

/// Checks that `tf` is a 2-factor of `g` and `s` a selection for it.
fn check_inputs(g: &MultiGraph, tf: &TwoFactor, s: &EdgeSelection) -> Result<()> {
    if tf.cycle_of_vertex.len() != g.order() {
        return Err(Error::Precondition(format!(
            "2-factor covers {} vertices, graph has {}",
            tf.cycle_of_vertex.len(),
            g.order()
        )));
    }
    for c in &tf.cycles {
        for (i, &e) in c.edges.iter().enumerate() {
            g.check_edge(e)?;
            let (a, b) = g.ends(e);
            let (x, y) = (c.at(i), c.at(i + 1));
            if tf.in_matching(e) || !((a, b) == (x, y) || (a, b) == (y, x)) {
                return Err(Error::Precondition(format!(
                    "cycle edge {e} does not belong to this graph's 2-factor"
                )));
            }
        }
    }
    if s.degree_of_cycle.len() != tf.cycles.len() {
        return Err(Error::Precondition(
            "selection built for another 2-factor".into(),
        ));
    }
    check_selection(g, tf, &s.selected).map_err(Error::Precondition)
}

/// The colour-3 edge of every odd cycle, keyed by cycle index.
///
/// Degree 2: the edge joining the two attachments. Degree 1 at position `p`:
/// the edge from `p` to `p + 1`. Degree 0: the edge at positions 0 and 1.
pub fn place_colour_3(
    g: &MultiGraph,
    tf: &TwoFactor,
    s: &EdgeSelection,
) -> Result<BTreeMap<usize, EdgeId>> {
    check_inputs(g, tf, s)?;
    let mut placed = BTreeMap::new();
    for (index, c) in tf.cycles.iter().enumerate() {
        if !c.is_odd() {
            continue;
        }
        let attachments: Vec<usize> = s
            .attachments(tf, index)
            .into_iter()
            .map(|v| tf.position[v])
            .collect();
        let edge = match attachments.as_slice() {
            [] => c.edge_after(0),
            &[p] => c.edge_after(p),
            &[p, q] => {
                let l = c.len();
                if (p + 1) % l == q {
                    c.edge_after(p)
                } else if (q + 1) % l == p {
                    c.edge_after(q)
                } else {
                    return Err(Error::Invariant(format!(
                        "attachments of cycle {index} are not consecutive"
                    )));
                }
            }
            _ => unreachable!("selection checked"),
        };
        placed.insert(index, edge);
    }
    Ok(placed)
}

/// Position `j` of an odd cycle whose colour-3 edge joins `j` and `j + 1`.
/// Position `j + 1` is the head of the remaining path and `j` its tail.
fn three_position(tf: &TwoFactor, cycle: usize, three: EdgeId) -> usize {
    tf.cycles[cycle]
        .edges
        .iter()
        .position(|&e| e == three)
        .expect("colour-3 edge lies on its cycle")
}

/// Phase bits of the paths and the resulting partial colouring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhaseSolution {
    /// Per cycle: `false` starts the path (or even cycle) with colour 1 at
    /// its head, `true` with colour 2.
    pub phase: Vec<bool>,
    /// Colours 1 to 3 on cycle edges, 0 on matching edges.
    pub colours: Vec<Colour>,
    /// Selected edges whose flanking path colours differ.
    pub violated: BTreeSet<EdgeId>,
}

/// 1 at the tail of the path, 0 at the head. The flank colour at `v` is
/// `phase ^ side`.
fn side(tf: &TwoFactor, three: &BTreeMap<usize, EdgeId>, v: Vertex) -> bool {
    let cycle = tf.cycle_of_vertex[v];
    let j = three_position(tf, cycle, three[&cycle]);
    if tf.position[v] == j {
        true
    } else if tf.position[v] == (j + 1) % tf.cycles[cycle].len() {
        false
    } else {
        panic!("vertex {v} is not an end of the colour-3 edge on cycle {cycle}");
    }
}

/// Colours all cycle edges so that every selected edge is poor, except that
/// an S-component whose quotient is an odd cycle keeps exactly one medium
/// selected edge, the one with smallest id.
///
/// Each selected edge `xy` gives the constraint
/// `phase(C_x) ^ side(x) == phase(C_y) ^ side(y)`. Constraints are propagated
/// breadth-first from the smallest cycle index of each component; on a
/// component of cycle shape the smallest-id edge is left out of the
/// propagation and checked afterwards.
pub fn solve_path_phases(
    g: &MultiGraph,
    tf: &TwoFactor,
    s: &EdgeSelection,
    three: &BTreeMap<usize, EdgeId>,
) -> Result<PhaseSolution> {
    check_inputs(g, tf, s)?;
    for (index, c) in tf.cycles.iter().enumerate() {
        match three.get(&index) {
            Some(&e) if c.is_odd() && c.edges.contains(&e) => {}
            None if !c.is_odd() => {}
            _ => {
                return Err(Error::Precondition(format!(
                    "colour-3 placement does not match cycle {index}"
                )))
            }
        }
    }
    for &e in &s.selected {
        let (u, v) = g.ends(e);
        for x in [u, v] {
            let c = tf.cycle_of_vertex[x];
            let (a, b) = g.ends(three[&c]);
            if x != a && x != b {
                return Err(Error::Precondition(format!(
                    "selected edge {e} is not adjacent to the colour-3 edge of cycle {c}"
                )));
            }
        }
    }

    let k = tf.cycles.len();
    let mut phase = vec![false; k];
    let components = s_components(g, tf, s);
    let mut violated = BTreeSet::new();
    for comp in &components {
        let skipped = match comp.shape {
            Shape::Cycle => comp.associated_edges.first().copied(),
            _ => None,
        };
        let mut adjacency: BTreeMap<usize, Vec<(usize, bool)>> = BTreeMap::new();
        for &e in &comp.associated_edges {
            if Some(e) == skipped {
                continue;
            }
            let (u, v) = g.ends(e);
            let flip = side(tf, three, u) ^ side(tf, three, v);
            let (cu, cv) = (tf.cycle_of_vertex[u], tf.cycle_of_vertex[v]);
            adjacency.entry(cu).or_default().push((cv, flip));
            adjacency.entry(cv).or_default().push((cu, flip));
        }
        let root = *comp.cycles.first().expect("components are non-empty");
        let mut seen = BTreeSet::from([root]);
        let mut queue = VecDeque::from([root]);
        while let Some(c) = queue.pop_front() {
            for &(d, flip) in adjacency.get(&c).map(Vec::as_slice).unwrap_or(&[]) {
                if seen.insert(d) {
                    phase[d] = phase[c] ^ flip;
                    queue.push_back(d);
                }
            }
        }
        for &e in &comp.associated_edges {
            let (u, v) = g.ends(e);
            let fu = phase[tf.cycle_of_vertex[u]] ^ side(tf, three, u);
            let fv = phase[tf.cycle_of_vertex[v]] ^ side(tf, three, v);
            if fu != fv {
                violated.insert(e);
            }
        }
        let expected: BTreeSet<EdgeId> = if comp.is_odd_cycle() {
            skipped.into_iter().collect()
        } else {
            BTreeSet::new()
        };
        let actual: BTreeSet<EdgeId> = comp
            .associated_edges
            .iter()
            .copied()
            .filter(|e| violated.contains(e))
            .collect();
        if actual != expected {
            return Err(Error::Invariant(format!(
                "phase constraints of the {} component {:?} leave medium selected edges {:?}",
                comp.shape, comp.cycles, actual
            )));
        }
    }

    let mut colours = vec![0; g.size()];
    for (index, c) in tf.cycles.iter().enumerate() {
        let first = if phase[index] { 2 } else { 1 };
        let l = c.len();
        if c.is_odd() {
            let j = three_position(tf, index, three[&index]);
            colours[c.edges[j]] = COLOUR_ODD;
            for t in 0..l - 1 {
                colours[c.edge_after(j + 1 + t)] = if t % 2 == 0 { first } else { 3 - first };
            }
        } else {
            for (i, &e) in c.edges.iter().enumerate() {
                colours[e] = if i % 2 == 0 { first } else { 3 - first };
            }
        }
    }
    Ok(PhaseSolution {
        phase,
        colours,
        violated,
    })
}

/// The full construction: colour-3 placement, phase solving and colour 4 on
/// the matching.
pub fn construct_colouring(
    g: &MultiGraph,
    tf: &TwoFactor,
    s: &EdgeSelection,
) -> Result<EdgeColouring> {
    let three = place_colour_3(g, tf, s)?;
    let mut solution = solve_path_phases(g, tf, s, &three)?;
    for &e in &tf.matching {
        solution.colours[e] = COLOUR_MATCHING;
    }
    EdgeColouring::new(g, 4, solution.colours)
        .map_err(|e| Error::Invariant(format!("constructed colouring rejected: {e}")))
}

/// Result of checking the structural properties of a constructed colouring.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BulletAudit {
    pub matching_is_colour_4: bool,
    pub colour_3_once_per_odd_cycle: bool,
    pub selected_edges_flanked_by_3: bool,
    pub medium_selected_edges_ok: bool,
    pub no_rich_edges: bool,
    pub failures: Vec<String>,
}

impl BulletAudit {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Rechecks the construction's properties from the colouring alone.
pub fn audit_bullets(
    g: &MultiGraph,
    tf: &TwoFactor,
    s: &EdgeSelection,
    c: &EdgeColouring,
) -> Result<BulletAudit> {
    check_inputs(g, tf, s)?;
    if c.len() != g.size() {
        return Err(Error::InvalidColouring("colouring of another graph".into()));
    }
    let mut failures = Vec::new();

    let fours: BTreeSet<EdgeId> = g.edge_ids().filter(|&e| c.colour(e) == 4).collect();
    let matching_is_colour_4 = fours == tf.matching;
    if !matching_is_colour_4 {
        failures.push("colour-4 edges differ from the perfect matching".to_string());
    }

    let mut colour_3_once_per_odd_cycle = true;
    for (index, cycle) in tf.cycles.iter().enumerate() {
        let threes = cycle.edges.iter().filter(|&&e| c.colour(e) == 3).count();
        let want = usize::from(cycle.is_odd());
        if threes != want {
            colour_3_once_per_odd_cycle = false;
            failures.push(format!(
                "cycle {index} of length {} has {threes} edges of colour 3",
                cycle.len()
            ));
        }
    }

    let mut selected_edges_flanked_by_3 = true;
    for &e in &s.selected {
        let threes = g
            .adjacent_edges(e)?
            .adjacent
            .iter()
            .filter(|&&f| c.colour(f) == 3)
            .count();
        if threes != 2 {
            selected_edges_flanked_by_3 = false;
            failures.push(format!(
                "selected edge {e} is adjacent to {threes} edges of colour 3"
            ));
        }
    }

    let classes: Vec<EdgeClass> = g
        .edge_ids()
        .map(|e| class_from_colours(g, c.colours(), e).expect("total colouring"))
        .collect();
    let mut medium_selected_edges_ok = true;
    for comp in s_components(g, tf, s) {
        let medium = comp
            .associated_edges
            .iter()
            .filter(|&&e| classes[e] == EdgeClass::Medium)
            .count();
        let want = usize::from(comp.is_odd_cycle());
        if medium != want {
            medium_selected_edges_ok = false;
            failures.push(format!(
                "{} component {:?} has {medium} medium selected edges, expected {want}",
                comp.shape, comp.cycles
            ));
        }
    }

    let rich: Vec<EdgeId> = g
        .edge_ids()
        .filter(|&e| classes[e] == EdgeClass::Rich)
        .collect();
    let no_rich_edges = rich.is_empty();
    if !no_rich_edges {
        failures.push(format!("rich edges {rich:?}"));
    }

    Ok(BulletAudit {
        matching_is_colour_4,
        colour_3_once_per_odd_cycle,
        selected_edges_flanked_by_3,
        medium_selected_edges_ok,
        no_rich_edges,
        failures,
    })
}

/// Number of medium cycle edges on each cycle of the 2-factor.
pub fn fact_one_counts(g: &MultiGraph, tf: &TwoFactor, c: &EdgeColouring) -> Vec<usize> {
    tf.cycles
        .iter()
        .map(|cycle| {
            cycle
                .edges
                .iter()
                .filter(|&&e| class_from_colours(g, c.colours(), e) == Some(EdgeClass::Medium))
                .count()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colouring::medium_count;
    use crate::factor::{enumerate_perfect_matchings, two_factor_from_matching, Matching};
    use crate::graph::named::*;
    use crate::selection::{find_optimal_selection, selection_from_edges};

    fn spokes(g: &MultiGraph) -> TwoFactor {
        let n = g.order() / 2;
        let m: Matching = (n..2 * n).collect();
        two_factor_from_matching(g, &m).unwrap()
    }

    fn check_all(g: &MultiGraph, tf: &TwoFactor, s: &EdgeSelection) -> EdgeColouring {
        let c = construct_colouring(g, tf, s).unwrap();
        let audit = audit_bullets(g, tf, s, &c).unwrap();
        assert!(audit.passed(), "{:?}", audit.failures);
        for (cycle, count) in tf.cycles.iter().zip(fact_one_counts(g, tf, &c)) {
            assert_eq!(count, if cycle.is_odd() { 3 } else { 0 });
        }
        c
    }

    #[test]
    fn petersen_construction_has_eight_medium_edges() {
        let g = petersen();
        for m in enumerate_perfect_matchings(&g, 100).unwrap() {
            let tf = two_factor_from_matching(&g, &m).unwrap();
            let s = find_optimal_selection(&g, &tf);
            let c = check_all(&g, &tf, &s);
            assert_eq!(medium_count(&g, &c), 8);
        }
    }

    #[test]
    fn colour_3_placement_follows_attachments() {
        let g = petersen();
        let tf = spokes(&g);
        let s = selection_from_edges(&g, &tf, BTreeSet::from([6])).unwrap();
        let three = place_colour_3(&g, &tf, &s).unwrap();
        // Spoke 6 joins 1 (outer position 1) and 6 (inner order 5,7,9,6,8,
        // position 3).
        assert_eq!(three[&0], tf.cycles[0].edge_after(1));
        assert_eq!(three[&1], tf.cycles[1].edge_after(3));
        let empty = selection_from_edges(&g, &tf, BTreeSet::new()).unwrap();
        let three = place_colour_3(&g, &tf, &empty).unwrap();
        assert_eq!(three[&0], tf.cycles[0].edges[0]);
    }

    #[test]
    fn double_edge_component_has_poor_selected_edges() {
        let g = prism(5);
        let tf = spokes(&g);
        let s = find_optimal_selection(&g, &tf);
        assert_eq!(s.len(), 2);
        let c = check_all(&g, &tf, &s);
        // Oracle: recount classes of the two selected edges directly.
        for &e in &s.selected {
            let colours: BTreeSet<_> = g
                .adjacent_edges(e)
                .unwrap()
                .adjacent
                .iter()
                .map(|&f| c.colour(f))
                .collect();
            assert_eq!(colours.len(), 2);
        }
        assert!(medium_count(&g, &c) < 8);
    }

    /// Three pentagons joined in a ring by single edges at consecutive
    /// positions, with their remaining vertices matched into a 9-cycle.
    fn three_pentagon_ring() -> (MultiGraph, TwoFactor, EdgeSelection) {
        // Pentagons A, B, C (vertices 0-4, 5-9, 10-14) and a 9-cycle D
        // (15-23). Ring edges: A1-B0, B1-C0, C1-A0. Each pentagon's
        // positions 2, 3, 4 go to D.
        let mut edges = Vec::new();
        for p in 0..3 {
            for i in 0..5 {
                edges.push((5 * p + i, 5 * p + (i + 1) % 5));
            }
        }
        for i in 0..9 {
            edges.push((15 + i, 15 + (i + 1) % 9));
        }
        let ring_start = edges.len();
        edges.push((1, 5));
        edges.push((6, 10));
        edges.push((11, 0));
        let mut d = 15;
        for p in 0..3 {
            for i in 2..5 {
                edges.push((5 * p + i, d));
                d += 1;
            }
        }
        let g = MultiGraph::new(24, &edges).unwrap();
        assert!(g.is_cubic() && g.is_simple());
        let m: Matching = (ring_start..edges.len()).collect();
        let tf = two_factor_from_matching(&g, &m).unwrap();
        let s = selection_from_edges(
            &g,
            &tf,
            BTreeSet::from([ring_start, ring_start + 1, ring_start + 2]),
        )
        .unwrap();
        (g, tf, s)
    }

    #[test]
    fn odd_cycle_component_keeps_exactly_one_medium_selected_edge() {
        let (g, tf, s) = three_pentagon_ring();
        let comps = s_components(&g, &tf, &s);
        assert!(comps
            .iter()
            .any(|k| k.is_odd_cycle() && k.cycles.len() == 3));
        let three = place_colour_3(&g, &tf, &s).unwrap();
        let solution = solve_path_phases(&g, &tf, &s, &three).unwrap();
        assert_eq!(
            solution.violated,
            BTreeSet::from([*s.selected.first().unwrap()])
        );
        check_all(&g, &tf, &s);
    }

    #[test]
    fn construction_holds_on_every_two_factor_of_small_graphs() {
        for g in [
            petersen(),
            prism(5),
            prism(4),
            complete_bipartite33(),
            flower_snark(5),
        ] {
            for m in enumerate_perfect_matchings(&g, 200).unwrap() {
                let tf = two_factor_from_matching(&g, &m).unwrap();
                let s = find_optimal_selection(&g, &tf);
                check_all(&g, &tf, &s);
            }
        }
    }

    #[test]
    fn rejects_foreign_selection() {
        let g = petersen();
        let tf = spokes(&g);
        let mut s = selection_from_edges(&g, &tf, BTreeSet::from([5])).unwrap();
        s.selected.insert(0);
        assert!(matches!(
            construct_colouring(&g, &tf, &s),
            Err(Error::Precondition(_))
        ));
    }
}
