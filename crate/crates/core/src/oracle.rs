//! Exhaustive search over proper k-edge-colourings: the minimum number of
//! medium edges and the existence of normal colourings.
//!
//! Edges are coloured in breadth-first order from vertex 0. An edge's class
//! is final once every edge adjacent to it is coloured, and only final medium
//! edges count towards the pruning bound. With symmetry breaking on, a colour
//! may only be used once every smaller colour has been used, which fixes the
//! edges at vertex 0 to 1, 2, 3.

use serde::Serialize;

use crate::colouring::{bfs_edge_order, class_from_colours, Colour, EdgeClass, EdgeColouring};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, MultiGraph};
use crate::petersen::{
    classify_petersen_colouring, normal_to_petersen, petersen_to_normal, PetersenClass,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleOptions {
    pub symmetry_breaking: bool,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions {
            symmetry_breaking: true,
        }
    }
}

fn check_palette(k: u8) -> Result<()> {
    if (3..=6).contains(&k) {
        Ok(())
    } else {
        Err(Error::UnsupportedPalette(k))
    }
}

struct Search<'a> {
    g: &'a MultiGraph,
    k: Colour,
    order: Vec<EdgeId>,
    /// Edges whose class becomes final when the edge at each depth is coloured.
    finalised: Vec<Vec<EdgeId>>,
    colours: Vec<Colour>,
    symmetry_breaking: bool,
}

impl<'a> Search<'a> {
    fn new(g: &'a MultiGraph, k: Colour, options: OracleOptions) -> Self {
        let order = bfs_edge_order(g);
        let mut depth = vec![0; g.size()];
        for (i, &e) in order.iter().enumerate() {
            depth[e] = i;
        }
        let mut finalised = vec![Vec::new(); order.len()];
        for e in g.edge_ids() {
            let last = g
                .adjacent_edges(e)
                .expect("edge exists")
                .adjacent
                .iter()
                .map(|&f| depth[f])
                .max();
            if let Some(d) = last {
                finalised[d].push(e);
            }
        }
        Search {
            g,
            k,
            order,
            finalised,
            colours: vec![0; g.size()],
            symmetry_breaking: options.symmetry_breaking,
        }
    }

    fn allowed(&self, e: EdgeId, c: Colour) -> bool {
        let (a, b) = self.g.ends(e);
        !self
            .g
            .incident(a)
            .iter()
            .chain(self.g.incident(b))
            .any(|&f| f != e && self.colours[f] == c)
    }

    /// Colours usable at `depth` given the largest colour used so far.
    fn palette(&self, max_used: Colour) -> Colour {
        if self.symmetry_breaking {
            (max_used + 1).min(self.k)
        } else {
            self.k
        }
    }

    fn medium_at(&self, depth: usize) -> usize {
        self.finalised[depth]
            .iter()
            .filter(|&&e| class_from_colours(self.g, &self.colours, e) == Some(EdgeClass::Medium))
            .count()
    }

    /// Visits complete colourings whose final medium count stays below
    /// `*cap`; `visit` may lower the cap and returns `true` to stop.
    fn run(
        &mut self,
        depth: usize,
        max_used: Colour,
        medium: usize,
        cap: &mut usize,
        visit: &mut dyn FnMut(&[Colour], usize, &mut usize) -> bool,
    ) -> bool {
        if depth == self.order.len() {
            return visit(&self.colours, medium, cap);
        }
        let e = self.order[depth];
        for c in 1..=self.palette(max_used) {
            if !self.allowed(e, c) {
                continue;
            }
            self.colours[e] = c;
            let m = medium + self.medium_at(depth);
            if m < *cap && self.run(depth + 1, max_used.max(c), m, cap, visit) {
                self.colours[e] = 0;
                return true;
            }
        }
        self.colours[e] = 0;
        false
    }
}

/// The minimum number of medium edges over all proper k-edge-colourings,
/// with the first optimal colouring in search order.
pub fn min_medium_exact(g: &MultiGraph, k: u8) -> Result<(usize, EdgeColouring)> {
    min_medium_exact_with(g, k, OracleOptions::default())
}

pub fn min_medium_exact_with(
    g: &MultiGraph,
    k: u8,
    options: OracleOptions,
) -> Result<(usize, EdgeColouring)> {
    check_palette(k)?;
    g.require_valid()?;
    let mut search = Search::new(g, k, options);
    let mut best: Option<(usize, Vec<Colour>)> = None;
    let mut cap = usize::MAX;
    search.run(0, 0, 0, &mut cap, &mut |colours, medium, cap| {
        best = Some((medium, colours.to_vec()));
        *cap = medium;
        medium == 0
    });
    let (count, colours) = best.ok_or(Error::NoColouring(k))?;
    Ok((count, EdgeColouring::new(g, k, colours)?))
}

/// A proper k-edge-colouring without medium edges, if one exists.
pub fn exists_normal(g: &MultiGraph, k: u8) -> Result<Option<EdgeColouring>> {
    Ok(enumerate_normal(g, k, 1)?.into_iter().next())
}

/// Up to `limit` normal k-edge-colourings in search order (one per colour
/// permutation class with the default options).
pub fn enumerate_normal(g: &MultiGraph, k: u8, limit: usize) -> Result<Vec<EdgeColouring>> {
    enumerate_normal_with(g, k, limit, OracleOptions::default())
}

pub fn enumerate_normal_with(
    g: &MultiGraph,
    k: u8,
    limit: usize,
    options: OracleOptions,
) -> Result<Vec<EdgeColouring>> {
    check_palette(k)?;
    g.require_valid()?;
    if limit == 0 {
        return Err(Error::InvalidLimit);
    }
    let mut search = Search::new(g, k, options);
    let mut found = Vec::new();
    let mut cap = 1;
    search.run(0, 0, 0, &mut cap, &mut |colours, _, _| {
        found.push(colours.to_vec());
        found.len() >= limit
    });
    found
        .into_iter()
        .map(|c| EdgeColouring::new(g, k, c))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjectureReport {
    pub holds: bool,
    pub witness: Option<Vec<Colour>>,
    /// The witness induces a valid Petersen colouring that maps back to it.
    pub petersen_round_trip: Option<bool>,
    pub petersen_class: Option<PetersenClass>,
}

/// Searches for a normal 5-edge-colouring and cross-checks it through the
/// Petersen correspondence.
pub fn verify_conjecture_on(g: &MultiGraph) -> Result<ConjectureReport> {
    let Some(f) = exists_normal(g, 5)? else {
        return Ok(ConjectureReport {
            holds: false,
            witness: None,
            petersen_round_trip: None,
            petersen_class: None,
        });
    };
    let (round_trip, class) = match normal_to_petersen(g, &f) {
        Ok(pc) => {
            let back = petersen_to_normal(g, &pc);
            let ok = back.is_ok_and(|b| b.colours() == f.colours());
            (ok, Some(classify_petersen_colouring(&pc)))
        }
        Err(_) => (false, None),
    };
    Ok(ConjectureReport {
        holds: true,
        witness: Some(f.colours().to_vec()),
        petersen_round_trip: Some(round_trip),
        petersen_class: class,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colouring::{classify_all, medium_count};
    use crate::graph::named::*;

    /// Independent oracle: all k^|E| assignments.
    fn brute_min(g: &MultiGraph, k: Colour) -> Option<usize> {
        let m = g.size();
        let mut best = None;
        let mut colours = vec![1; m];
        loop {
            if crate::colouring::check_proper(g, &colours).is_ok() {
                let c = EdgeColouring::new(g, k, colours.clone()).unwrap();
                let n = medium_count(g, &c);
                best = Some(best.map_or(n, |b: usize| b.min(n)));
            }
            let mut i = 0;
            while i < m && colours[i] == k {
                colours[i] = 1;
                i += 1;
            }
            if i == m {
                return best;
            }
            colours[i] += 1;
        }
    }

    #[test]
    fn agrees_with_full_enumeration_on_small_graphs() {
        for g in [complete4(), triple_edge(), complete_bipartite33(), prism(3)] {
            for k in 3..=4 {
                let oracle = brute_min(&g, k);
                let got = min_medium_exact(&g, k).ok().map(|(n, _)| n);
                assert_eq!(got, oracle);
            }
        }
    }

    #[test]
    fn petersen_needs_eight_medium_edges_with_four_colours() {
        let g = petersen();
        let (n, witness) = min_medium_exact(&g, 4).unwrap();
        assert_eq!(n, 8);
        assert_eq!(medium_count(&g, &witness), 8);
        assert_eq!(
            min_medium_exact_with(
                &g,
                4,
                OracleOptions {
                    symmetry_breaking: false
                }
            )
            .unwrap()
            .0,
            8
        );
        assert_eq!(min_medium_exact(&g, 3), Err(Error::NoColouring(3)));
    }

    #[test]
    fn petersen_normal_colouring_is_strong() {
        let g = petersen();
        assert!(exists_normal(&g, 4).unwrap().is_none());
        let f = exists_normal(&g, 5).unwrap().unwrap();
        assert!(classify_all(&g, &f).iter().all(|&c| c == EdgeClass::Rich));
        for f in enumerate_normal(&g, 5, 1000).unwrap() {
            assert!(classify_all(&g, &f).iter().all(|&c| c == EdgeClass::Rich));
        }
    }

    #[test]
    fn three_colourable_graphs_need_no_medium_edges() {
        for k in 3..=6 {
            assert_eq!(min_medium_exact(&complete4(), k).unwrap().0, 0);
            assert_eq!(min_medium_exact(&complete_bipartite33(), k).unwrap().0, 0);
        }
        let f = exists_normal(&complete4(), 3).unwrap().unwrap();
        assert!(classify_all(&complete4(), &f)
            .iter()
            .all(|&c| c == EdgeClass::Poor));
    }

    #[test]
    fn palette_must_be_supported() {
        assert_eq!(
            min_medium_exact(&complete4(), 2),
            Err(Error::UnsupportedPalette(2))
        );
        assert_eq!(
            min_medium_exact(&complete4(), 7),
            Err(Error::UnsupportedPalette(7))
        );
    }

    #[test]
    fn conjecture_holds_on_petersen_and_k4() {
        let r = verify_conjecture_on(&petersen()).unwrap();
        assert!(r.holds);
        assert_eq!(r.petersen_round_trip, Some(true));
        assert_eq!(r.petersen_class, Some(PetersenClass::Surjective));
        let r = verify_conjecture_on(&complete4()).unwrap();
        assert!(matches!(
            r.petersen_class,
            Some(PetersenClass::Trivial { .. })
        ));
    }

    #[test]
    fn symmetry_breaking_keeps_one_colouring_per_permutation_class() {
        let g = complete4();
        let all = enumerate_normal_with(
            &g,
            3,
            10_000,
            OracleOptions {
                symmetry_breaking: false,
            },
        )
        .unwrap();
        let reps = enumerate_normal(&g, 3, 10_000).unwrap();
        assert_eq!(all.len(), 6 * reps.len());
    }
}
