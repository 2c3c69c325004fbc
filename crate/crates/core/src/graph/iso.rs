//! Isomorphism testing for small multigraphs.
//!
//! Vertices get an invariant colour (closed-walk counts and distance profile,
//! then neighbourhood refinement). Graphs with different colour multisets are
//! not isomorphic; otherwise an explicit bijection is searched for by
//! backtracking over colour-compatible candidates.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, VecDeque};
use std::hash::{Hash, Hasher};

use super::{MultiGraph, Vertex};

const WALK_LENGTHS: usize = 8;

fn hash_of<T: Hash>(value: &T) -> u64 {
    let mut h = DefaultHasher::new();
    value.hash(&mut h);
    h.finish()
}

fn multiplicity_matrix(g: &MultiGraph) -> Vec<Vec<u64>> {
    let n = g.order();
    let mut a = vec![vec![0u64; n]; n];
    for &(u, v) in g.edge_list() {
        a[u][v] += 1;
        a[v][u] += 1;
    }
    a
}

/// An isomorphism-invariant colour for every vertex.
pub fn vertex_invariants(g: &MultiGraph) -> Vec<u64> {
    let n = g.order();
    let a = multiplicity_matrix(g);
    let mut walks = vec![Vec::with_capacity(WALK_LENGTHS); n];
    let mut power = a.clone();
    for _ in 2..=WALK_LENGTHS {
        let mut next = vec![vec![0u64; n]; n];
        for i in 0..n {
            for k in 0..n {
                let p = power[i][k];
                if p == 0 {
                    continue;
                }
                for j in 0..n {
                    next[i][j] = next[i][j].wrapping_add(p.wrapping_mul(a[k][j]));
                }
            }
        }
        power = next;
        for (v, w) in walks.iter_mut().enumerate() {
            w.push(power[v][v]);
        }
    }

    let mut colour: Vec<u64> = (0..n)
        .map(|v| hash_of(&(g.degree(v), &walks[v], distance_profile(g, v))))
        .collect();
    let mut classes = count_classes(&colour);
    loop {
        let refined: Vec<u64> = (0..n)
            .map(|v| {
                let mut around: Vec<u64> = g.neighbours(v).map(|w| colour[w]).collect();
                around.sort_unstable();
                hash_of(&(colour[v], around))
            })
            .collect();
        let refined_classes = count_classes(&refined);
        colour = refined;
        if refined_classes == classes {
            break;
        }
        classes = refined_classes;
    }
    colour
}

fn count_classes(colour: &[u64]) -> usize {
    let mut sorted = colour.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    sorted.len()
}

fn distance_profile(g: &MultiGraph, s: Vertex) -> Vec<usize> {
    let mut dist = vec![usize::MAX; g.order()];
    dist[s] = 0;
    let mut layers = vec![1];
    let mut queue = VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        for w in g.neighbours(v) {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                if layers.len() <= dist[w] {
                    layers.push(0);
                }
                layers[dist[w]] += 1;
                queue.push_back(w);
            }
        }
    }
    layers
}

/// Isomorphism invariant of a whole graph. Equal certificates are necessary,
/// not sufficient, for isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Certificate {
    order: usize,
    size: usize,
    colours: Vec<u64>,
}

pub fn certificate(g: &MultiGraph) -> Certificate {
    let mut colours = vertex_invariants(g);
    colours.sort_unstable();
    Certificate {
        order: g.order(),
        size: g.size(),
        colours,
    }
}

/// A vertex bijection `map` with `mult_g(u, v) == mult_h(map[u], map[v])`
/// for all pairs, if one exists.
pub fn find_isomorphism(g: &MultiGraph, h: &MultiGraph) -> Option<Vec<Vertex>> {
    if g.order() != h.order() || g.size() != h.size() {
        return None;
    }
    let cg = vertex_invariants(g);
    let ch = vertex_invariants(h);
    let mut sg = cg.clone();
    let mut sh = ch.clone();
    sg.sort_unstable();
    sh.sort_unstable();
    if sg != sh {
        return None;
    }

    let n = g.order();
    let ag = multiplicity_matrix(g);
    let ah = multiplicity_matrix(h);
    let mut by_colour: BTreeMap<u64, Vec<Vertex>> = BTreeMap::new();
    for (v, &c) in ch.iter().enumerate() {
        by_colour.entry(c).or_default().push(v);
    }

    // Visit g in BFS order so that most vertices have a mapped neighbour,
    // which restricts their candidates to the neighbours of its image.
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for w in g.neighbours(v) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let search = Search {
        g,
        h,
        ag: &ag,
        ah: &ah,
        cg: &cg,
        ch: &ch,
        by_colour: &by_colour,
        order: &order,
    };
    if search.extend(0, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

struct Search<'a> {
    g: &'a MultiGraph,
    h: &'a MultiGraph,
    ag: &'a [Vec<u64>],
    ah: &'a [Vec<u64>],
    cg: &'a [u64],
    ch: &'a [u64],
    by_colour: &'a BTreeMap<u64, Vec<Vertex>>,
    order: &'a [Vertex],
}

impl Search<'_> {
    fn extend(&self, depth: usize, map: &mut [Vertex], used: &mut [bool]) -> bool {
        let Some(&v) = self.order.get(depth) else {
            return true;
        };
        let anchor = self.g.neighbours(v).find(|&u| map[u] != usize::MAX);
        let candidates: Vec<Vertex> = match anchor {
            Some(u) => {
                let mut c: Vec<Vertex> = self.h.neighbours(map[u]).collect();
                c.sort_unstable();
                c.dedup();
                c
            }
            None => self.by_colour.get(&self.cg[v]).cloned().unwrap_or_default(),
        };
        for x in candidates {
            if used[x] || self.ch[x] != self.cg[v] || self.ah[x][x] != self.ag[v][v] {
                continue;
            }
            let consistent = self.order[..depth]
                .iter()
                .all(|&u| self.ag[v][u] == self.ah[x][map[u]]);
            if !consistent {
                continue;
            }
            map[v] = x;
            used[x] = true;
            if self.extend(depth + 1, map, used) {
                return true;
            }
            map[v] = usize::MAX;
            used[x] = false;
        }
        false
    }
}

pub fn are_isomorphic(g: &MultiGraph, h: &MultiGraph) -> bool {
    find_isomorphism(g, h).is_some()
}
