use std::collections::VecDeque;

use super::{Colour, EdgeColouring};
use crate::graph::{EdgeId, MultiGraph};

/// Edges in breadth-first discovery order from vertex 0 (then from any vertex
/// of a later component).
pub fn bfs_edge_order(g: &MultiGraph) -> Vec<EdgeId> {
    let mut seen_vertex = vec![false; g.order()];
    let mut seen_edge = vec![false; g.size()];
    let mut order = Vec::with_capacity(g.size());
    for s in g.vertices() {
        if seen_vertex[s] {
            continue;
        }
        seen_vertex[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for &e in g.incident(v) {
                if !seen_edge[e] {
                    seen_edge[e] = true;
                    order.push(e);
                }
                let w = g.other_end(e, v);
                if !seen_vertex[w] {
                    seen_vertex[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    order
}

/// A proper 3-edge-colouring, if one exists (exact backtracking).
///
/// The edges at vertex 0 are fixed to colours 1, 2, 3 in incidence order;
/// every 3-edge-colouring can be permuted into that form.
pub fn try_3_edge_colouring(g: &MultiGraph) -> Option<EdgeColouring> {
    if g.vertices().any(|v| g.degree(v) > 3) {
        return None;
    }
    let order = bfs_edge_order(g);
    let mut colours = vec![0 as Colour; g.size()];
    let mut used = vec![0u8; g.order()];
    if g.order() > 0 {
        for (i, &e) in g.incident(0).iter().enumerate() {
            let c = i as Colour + 1;
            let (a, b) = g.ends(e);
            if used[a] & (1 << c) != 0 || used[b] & (1 << c) != 0 {
                return None;
            }
            colours[e] = c;
            used[a] |= 1 << c;
            used[b] |= 1 << c;
        }
    }
    let rest: Vec<EdgeId> = order.into_iter().filter(|&e| colours[e] == 0).collect();
    if extend(g, &rest, 0, &mut colours, &mut used) {
        Some(EdgeColouring::new(g, 3, colours).expect("backtracking keeps the colouring proper"))
    } else {
        None
    }
}

fn extend(
    g: &MultiGraph,
    rest: &[EdgeId],
    depth: usize,
    colours: &mut [Colour],
    used: &mut [u8],
) -> bool {
    let Some(&e) = rest.get(depth) else {
        return true;
    };
    let (a, b) = g.ends(e);
    for c in 1..=3 {
        let bit = 1u8 << c;
        if (used[a] | used[b]) & bit != 0 {
            continue;
        }
        colours[e] = c;
        used[a] |= bit;
        used[b] |= bit;
        if extend(g, rest, depth + 1, colours, used) {
            return true;
        }
        used[a] &= !bit;
        used[b] &= !bit;
        colours[e] = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colouring::{classify_all, EdgeClass};
    use crate::graph::named::*;

    /// Independent oracle: all 3^|E| assignments.
    fn brute_force_colourable(g: &MultiGraph) -> bool {
        let m = g.size() as u32;
        (0..3u64.pow(m)).any(|mut code| {
            let colours: Vec<Colour> = (0..m)
                .map(|_| {
                    let c = (code % 3) as Colour + 1;
                    code /= 3;
                    c
                })
                .collect();
            super::super::check_proper(g, &colours).is_ok()
        })
    }

    #[test]
    fn class_one_graphs_get_a_colouring() {
        for g in [
            complete4(),
            complete_bipartite33(),
            prism(3),
            prism(5),
            triple_edge(),
        ] {
            let c = try_3_edge_colouring(&g).expect("3-edge-colourable");
            assert_eq!(c.palette(), 3);
            assert!(classify_all(&g, &c).iter().all(|&k| k == EdgeClass::Poor));
        }
    }

    #[test]
    fn snarks_have_none() {
        assert!(try_3_edge_colouring(&petersen()).is_none());
        assert!(try_3_edge_colouring(&flower_snark(5)).is_none());
    }

    #[test]
    fn agrees_with_exhaustive_assignment_on_small_graphs() {
        for g in [
            complete4(),
            complete_bipartite33(),
            prism(3),
            triple_edge(),
            petersen(),
        ] {
            assert_eq!(
                try_3_edge_colouring(&g).is_some(),
                brute_force_colourable(&g)
            );
        }
    }
}
