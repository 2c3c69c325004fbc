//! The Petersen graph as the Kneser graph K(5, 2), its edge labelling, and
//! the correspondence between normal 5-edge-colourings and Petersen
//! colourings.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::colouring::{Colour, EdgeColouring};
use crate::error::{Error, Result};
use crate::graph::iso::are_isomorphic;
use crate::graph::{EdgeId, MultiGraph, Vertex};

/// A set of colours from `1..=5` as a bitmask over bits 1 to 5.
type ColourSet = u8;

const ALL: ColourSet = 0b11_1110;

fn set_of(colours: &[Colour]) -> ColourSet {
    colours.iter().fold(0, |s, &c| s | 1 << c)
}

fn members(s: ColourSet) -> Vec<Colour> {
    (1..=5).filter(|&c| s >> c & 1 == 1).collect()
}

/// K(5, 2): vertices are the 2-subsets of `{1, …, 5}` in lexicographic
/// order, edges join disjoint subsets, and each edge is labelled with the
/// one colour outside both subsets.
#[derive(Clone, Debug)]
pub struct KneserPetersen {
    pub graph: MultiGraph,
    pub subsets: Vec<[Colour; 2]>,
    pub labels: Vec<Colour>,
}

pub fn build_kneser_petersen() -> KneserPetersen {
    let mut subsets = Vec::new();
    for a in 1..=5 {
        for b in a + 1..=5 {
            subsets.push([a, b]);
        }
    }
    let mut edges = Vec::new();
    let mut labels = Vec::new();
    for i in 0..subsets.len() {
        for j in i + 1..subsets.len() {
            let (x, y) = (set_of(&subsets[i]), set_of(&subsets[j]));
            if x & y == 0 {
                edges.push((i, j));
                labels.push(members(ALL & !(x | y))[0]);
            }
        }
    }
    let graph = MultiGraph::new(subsets.len(), &edges).expect("valid Kneser graph");
    KneserPetersen {
        graph,
        subsets,
        labels,
    }
}

impl KneserPetersen {
    pub fn vertex_of(&self, subset: ColourSet) -> Option<Vertex> {
        self.subsets.iter().position(|s| set_of(s) == subset)
    }

    fn subset(&self, v: Vertex) -> ColourSet {
        set_of(&self.subsets[v])
    }

    /// The edge joining the vertices for two disjoint subsets.
    fn edge_between(&self, x: ColourSet, y: ColourSet) -> Option<EdgeId> {
        let (u, v) = (self.vertex_of(x)?, self.vertex_of(y)?);
        self.graph.edges_between(u, v).first().copied()
    }

    pub fn label(&self, e: EdgeId) -> Colour {
        self.labels[e]
    }
}

/// An assignment of a Petersen-graph edge to every edge of `G`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PetersenColouring {
    pub assignment: Vec<EdgeId>,
}

impl PetersenColouring {
    /// Adjacent edges of `g` must go to distinct adjacent edges of the
    /// Petersen graph.
    pub fn validate(&self, g: &MultiGraph, p: &KneserPetersen) -> Result<()> {
        if self.assignment.len() != g.size() {
            return Err(Error::NotPetersenColouring(format!(
                "{} images for {} edges",
                self.assignment.len(),
                g.size()
            )));
        }
        if let Some(&bad) = self.assignment.iter().find(|&&x| x >= p.graph.size()) {
            return Err(Error::NotPetersenColouring(format!(
                "no Petersen edge {bad}"
            )));
        }
        for v in g.vertices() {
            let inc = g.incident(v);
            for (i, &e) in inc.iter().enumerate() {
                for &f in &inc[i + 1..] {
                    let (x, y) = (self.assignment[e], self.assignment[f]);
                    if x == y || !p.graph.edges_adjacent(x, y) {
                        return Err(Error::NotPetersenColouring(format!(
                            "edges {e} and {f} meet at vertex {v} but their images {x} and {y} do not meet"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// The Petersen colouring induced by a normal colouring with colours in
/// `1..=5`.
///
/// For `e = uv` coloured `c`, let `A_u` be the colours at `u`. The image of
/// `e` is the edge labelled `c` at the vertex `A_u − {c}`. Computing the same
/// edge from `v` succeeds exactly when `e` is not medium.
pub fn normal_to_petersen(g: &MultiGraph, f: &EdgeColouring) -> Result<PetersenColouring> {
    if f.len() != g.size() {
        return Err(Error::InvalidColouring("colouring of another graph".into()));
    }
    if let Some(e) = g.edge_ids().find(|&e| f.colour(e) > 5) {
        return Err(Error::InvalidColouring(format!(
            "edge {e} has colour {} outside 1..=5",
            f.colour(e)
        )));
    }
    let p = build_kneser_petersen();
    let at = |v: Vertex| {
        set_of(
            &g.incident(v)
                .iter()
                .map(|&e| f.colour(e))
                .collect::<Vec<_>>(),
        )
    };
    let mut assignment = Vec::with_capacity(g.size());
    for e in g.edge_ids() {
        let c = 1 << f.colour(e);
        let (u, v) = g.ends(e);
        let image = |x: Vertex| {
            let a = at(x);
            let w = a & !c;
            p.edge_between(w, ALL & !a)
        };
        match (image(u), image(v)) {
            (Some(x), Some(y)) if x == y => assignment.push(x),
            _ => return Err(Error::NotNormal(e)),
        }
    }
    let pc = PetersenColouring { assignment };
    pc.validate(g, &p)
        .map_err(|e| Error::Invariant(format!("induced map is not a Petersen colouring: {e}")))?;
    Ok(pc)
}

/// `f(e) = ℓ(g(e))`, a normal 5-edge-colouring.
pub fn petersen_to_normal(g: &MultiGraph, pc: &PetersenColouring) -> Result<EdgeColouring> {
    let p = build_kneser_petersen();
    pc.validate(g, &p)?;
    let colours = pc.assignment.iter().map(|&x| p.label(x)).collect();
    let f = EdgeColouring::new(g, 5, colours)
        .map_err(|e| Error::Invariant(format!("labels of a Petersen colouring clash: {e}")))?;
    if let Some(&e) = crate::colouring::medium_edges(g, &f).first() {
        return Err(Error::Invariant(format!(
            "Petersen colouring induced a medium edge {e}"
        )));
    }
    Ok(f)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum PetersenClass {
    /// Every image edge meets the Petersen vertex `centre`.
    Trivial {
        centre: Vertex,
    },
    Surjective,
    /// Neither trivial nor surjective; the image is the witness.
    Neither {
        image: Vec<EdgeId>,
    },
}

pub fn classify_petersen_colouring(pc: &PetersenColouring) -> PetersenClass {
    let p = build_kneser_petersen();
    let image: BTreeSet<EdgeId> = pc.assignment.iter().copied().collect();
    if image.len() == p.graph.size() {
        return PetersenClass::Surjective;
    }
    for w in p.graph.vertices() {
        if image.iter().all(|&x| p.graph.is_incident(x, w)) {
            return PetersenClass::Trivial { centre: w };
        }
    }
    PetersenClass::Neither {
        image: image.into_iter().collect(),
    }
}

/// Exact recognition of the Petersen graph.
pub fn is_petersen_graph(g: &MultiGraph) -> bool {
    g.order() == 10
        && g.is_cubic()
        && g.is_simple()
        && g.girth() == Some(5)
        && are_isomorphic(g, &build_kneser_petersen().graph)
}

/// The subset names of a Petersen-graph edge, for display.
pub fn describe_edge(p: &KneserPetersen, x: EdgeId) -> String {
    let (a, b) = p.graph.ends(x);
    let show = |v: Vertex| {
        let s = members(p.subset(v));
        format!("{{{},{}}}", s[0], s[1])
    };
    format!("{}-{}", show(a), show(b))
}
