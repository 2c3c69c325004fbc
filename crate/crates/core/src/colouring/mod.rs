//! Edge colourings, edge classification and the colouring pipeline.

mod construct;
mod pipeline;
mod three;

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, MultiGraph};

pub use construct::{
    audit_bullets, construct_colouring, fact_one_counts, place_colour_3, solve_path_phases,
    BulletAudit, PhaseSolution, COLOUR_MATCHING, COLOUR_ODD,
};
pub use pipeline::{
    colour_graph, colour_graph_with, Branch, Construction, PipelineOptions, PipelineOutcome,
};
pub use three::{bfs_edge_order, try_3_edge_colouring};

pub type Colour = u8;

/// A proper edge-colouring with colours `1..=palette`, indexed by edge id.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EdgeColouring {
    palette: u8,
    colours: Vec<Colour>,
}

impl EdgeColouring {
    /// Validates range and properness.
    pub fn new(g: &MultiGraph, palette: u8, colours: Vec<Colour>) -> Result<Self> {
        if palette < 3 {
            return Err(Error::UnsupportedPalette(palette));
        }
        if colours.len() != g.size() {
            return Err(Error::InvalidColouring(format!(
                "{} colours for {} edges",
                colours.len(),
                g.size()
            )));
        }
        if let Some((e, &c)) = colours
            .iter()
            .enumerate()
            .find(|&(_, &c)| c == 0 || c > palette)
        {
            return Err(Error::InvalidColouring(format!(
                "edge {e} has colour {c} outside 1..={palette}"
            )));
        }
        check_proper(g, &colours)?;
        Ok(EdgeColouring { palette, colours })
    }

    pub fn palette(&self) -> u8 {
        self.palette
    }

    pub fn colour(&self, e: EdgeId) -> Colour {
        self.colours[e]
    }

    pub fn colours(&self) -> &[Colour] {
        &self.colours
    }

    pub fn len(&self) -> usize {
        self.colours.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colours.is_empty()
    }

    /// Number of distinct colours actually used.
    pub fn colours_used(&self) -> usize {
        let mut seen = 0u32;
        for &c in &self.colours {
            seen |= 1 << c;
        }
        seen.count_ones() as usize
    }

    fn check_graph(&self, g: &MultiGraph) -> Result<()> {
        if self.colours.len() == g.size() {
            Ok(())
        } else {
            Err(Error::InvalidColouring(format!(
                "colouring of {} edges used on a graph with {} edges",
                self.colours.len(),
                g.size()
            )))
        }
    }
}

/// Fails on the first pair of adjacent edges with equal colour. Uncoloured
/// edges (colour 0) are ignored.
pub fn check_proper(g: &MultiGraph, colours: &[Colour]) -> Result<()> {
    for v in g.vertices() {
        let inc = g.incident(v);
        for (i, &e) in inc.iter().enumerate() {
            for &f in &inc[i + 1..] {
                if colours[e] != 0 && colours[e] == colours[f] {
                    return Err(Error::ImproperColouring {
                        first: e.min(f),
                        second: e.max(f),
                        colour: colours[e],
                    });
                }
            }
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeClass {
    Poor,
    Medium,
    Rich,
}

impl fmt::Display for EdgeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeClass::Poor => "poor",
            EdgeClass::Medium => "medium",
            EdgeClass::Rich => "rich",
        })
    }
}

/// Class of `e` from raw colours, or `None` if an edge of 𝓔(e) is still
/// uncoloured (colour 0).
pub fn class_from_colours(g: &MultiGraph, colours: &[Colour], e: EdgeId) -> Option<EdgeClass> {
    let (a, b) = g.ends(e);
    let mut seen = 0u32;
    for &f in g.incident(a).iter().chain(g.incident(b)) {
        if f == e {
            continue;
        }
        let c = colours[f];
        if c == 0 {
            return None;
        }
        seen |= 1 << c;
    }
    Some(match seen.count_ones() {
        0..=2 => EdgeClass::Poor,
        3 => EdgeClass::Medium,
        _ => EdgeClass::Rich,
    })
}

/// Poor iff |c(𝓔(e))| = 2, rich iff it is 4, medium otherwise.
pub fn classify_edge(g: &MultiGraph, c: &EdgeColouring, e: EdgeId) -> Result<EdgeClass> {
    c.check_graph(g)?;
    g.check_edge(e)?;
    Ok(class_from_colours(g, &c.colours, e).expect("total colouring"))
}

pub fn classify_all(g: &MultiGraph, c: &EdgeColouring) -> Vec<EdgeClass> {
    g.edge_ids()
        .map(|e| class_from_colours(g, &c.colours, e).expect("total colouring"))
        .collect()
}

pub fn medium_edges(g: &MultiGraph, c: &EdgeColouring) -> Vec<EdgeId> {
    g.edge_ids()
        .filter(|&e| class_from_colours(g, &c.colours, e) == Some(EdgeClass::Medium))
        .collect()
}

pub fn medium_count(g: &MultiGraph, c: &EdgeColouring) -> usize {
    medium_edges(g, c).len()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ClassCounts {
    pub poor: usize,
    pub medium: usize,
    pub rich: usize,
}

impl ClassCounts {
    pub fn of(g: &MultiGraph, c: &EdgeColouring) -> Self {
        let mut counts = ClassCounts::default();
        for class in classify_all(g, c) {
            match class {
                EdgeClass::Poor => counts.poor += 1,
                EdgeClass::Medium => counts.medium += 1,
                EdgeClass::Rich => counts.rich += 1,
            }
        }
        counts
    }

    pub fn total(&self) -> usize {
        self.poor + self.medium + self.rich
    }
}

/// True when no edge is medium.
pub fn is_normal(g: &MultiGraph, c: &EdgeColouring) -> bool {
    medium_count(g, c) == 0
}
