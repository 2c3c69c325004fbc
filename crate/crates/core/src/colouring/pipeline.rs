//! End-to-end colouring: 3-colouring shortcut, reductions, construction and
//! lifting, with the `4n/5` bound asserted on the result.

use serde::Serialize;

use super::{
    audit_bullets, construct_colouring, medium_count, try_3_edge_colouring, EdgeColouring,
};
use crate::error::{Error, Result};
use crate::factor::{choose_two_factor, TwoFactor, DEFAULT_MATCHING_CAP};
use crate::graph::MultiGraph;
use crate::petersen::is_petersen_graph;
use crate::reduce::{lift, reduce_multi_edge, reduce_triangle, ReductionKind, ReductionRecord};
use crate::selection::{find_optimal_selection, EdgeSelection};

/// How the innermost graph of the reduction chain was coloured.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    ThreeColourable,
    Constructed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PipelineOptions {
    /// Perfect matchings examined when choosing the 2-factor.
    pub matching_cap: usize,
    /// Return [`Error::BoundViolation`] when the result exceeds the bound.
    pub enforce_bound: bool,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            matching_cap: DEFAULT_MATCHING_CAP,
            enforce_bound: true,
        }
    }
}

/// The graph coloured by the construction, with its 2-factor and selection.
#[derive(Clone, Debug)]
pub struct Construction {
    pub graph: MultiGraph,
    pub two_factor: TwoFactor,
    pub selection: EdgeSelection,
    pub colouring: EdgeColouring,
}

#[derive(Clone, Debug)]
pub struct PipelineOutcome {
    pub colouring: EdgeColouring,
    pub branch: Branch,
    /// Reductions in the order they were applied.
    pub reductions: Vec<ReductionKind>,
    /// Present when the branch is [`Branch::Constructed`].
    pub construction: Option<Construction>,
    pub medium: usize,
    pub order: usize,
    pub is_petersen: bool,
}

impl PipelineOutcome {
    /// `5 · medium ≤ 4n`.
    pub fn within_bound(&self) -> bool {
        5 * self.medium <= 4 * self.order
    }

    /// `5 · medium < 4n`.
    pub fn strictly_within_bound(&self) -> bool {
        5 * self.medium < 4 * self.order
    }

    /// The bound holds, strictly unless the graph is the Petersen graph.
    pub fn bound_holds(&self) -> bool {
        if self.is_petersen {
            self.within_bound()
        } else {
            self.strictly_within_bound()
        }
    }
}

pub fn colour_graph(g: &MultiGraph) -> Result<PipelineOutcome> {
    colour_graph_with(g, PipelineOptions::default())
}

pub fn colour_graph_with(g: &MultiGraph, options: PipelineOptions) -> Result<PipelineOutcome> {
    g.require_valid()?;
    let mut stack: Vec<(ReductionRecord, MultiGraph)> = Vec::new();
    let mut current = g.clone();
    let (mut colouring, branch, construction) = loop {
        if let Some(c) = try_3_edge_colouring(&current) {
            break (c, Branch::ThreeColourable, None);
        }
        if let Some((reduced, record)) = reduce_multi_edge(&current)? {
            stack.push((record, reduced.clone()));
            current = reduced;
            continue;
        }
        if let Some((reduced, record)) = reduce_triangle(&current)? {
            stack.push((record, reduced.clone()));
            current = reduced;
            continue;
        }
        let construction = construct(&current, options.matching_cap)?;
        break (
            construction.colouring.clone(),
            Branch::Constructed,
            Some(construction),
        );
    };

    let reductions = stack.iter().map(|(r, _)| r.kind()).collect();
    while let Some((record, reduced)) = stack.pop() {
        colouring = lift(&record, &reduced, &colouring)?;
    }

    let outcome = PipelineOutcome {
        medium: medium_count(g, &colouring),
        order: g.order(),
        is_petersen: is_petersen_graph(g),
        colouring,
        branch,
        reductions,
        construction,
    };
    if options.enforce_bound && !outcome.bound_holds() {
        return Err(Error::BoundViolation {
            medium: outcome.medium,
            order: outcome.order,
            strict: !outcome.is_petersen,
        });
    }
    Ok(outcome)
}

fn construct(g: &MultiGraph, matching_cap: usize) -> Result<Construction> {
    if !g.is_simple() || crate::reduce::find_triangle(g).is_some() {
        return Err(Error::Invariant(
            "construction reached with a multi-edge or triangle left".into(),
        ));
    }
    let two_factor = choose_two_factor(g, matching_cap)?;
    if two_factor.odd_cycle_count() < 2 {
        return Err(Error::Invariant(
            "graph without a 3-edge-colouring has a 2-factor with fewer than two odd cycles".into(),
        ));
    }
    let selection = find_optimal_selection(g, &two_factor);
    let colouring = construct_colouring(g, &two_factor, &selection)?;
    let audit = audit_bullets(g, &two_factor, &selection, &colouring)?;
    if !audit.passed() {
        return Err(Error::Invariant(format!(
            "constructed colouring fails its structural audit: {}",
            audit.failures.join("; ")
        )));
    }
    Ok(Construction {
        graph: g.clone(),
        two_factor,
        selection,
        colouring,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;

    #[test]
    fn petersen_is_tight() {
        let out = colour_graph(&petersen()).unwrap();
        assert_eq!(out.medium, 8);
        assert_eq!(out.branch, Branch::Constructed);
        assert!(out.is_petersen && out.within_bound() && !out.strictly_within_bound());
    }

    #[test]
    fn three_colourable_graphs_have_no_medium_edges() {
        for g in [complete4(), complete_bipartite33(), prism(5), triple_edge()] {
            let out = colour_graph(&g).unwrap();
            assert_eq!(out.branch, Branch::ThreeColourable);
            assert_eq!(out.medium, 0);
            assert!(out.reductions.is_empty());
        }
    }

    #[test]
    fn flower_snark_is_constructed_below_the_bound() {
        let g = flower_snark(5);
        let out = colour_graph(&g).unwrap();
        assert_eq!(out.branch, Branch::Constructed);
        assert!(out.strictly_within_bound());
    }

    #[test]
    fn petersen_with_a_vertex_blown_up_reduces_to_petersen() {
        // Replace vertex 0 of the Petersen graph by a triangle.
        let p = petersen();
        let mut edges: Vec<(usize, usize)> = Vec::new();
        let mut extra = 10;
        for &(a, b) in p.edge_list() {
            if a == 0 || b == 0 {
                let other = if a == 0 { b } else { a };
                let t = if extra == 10 { 0 } else { extra - 1 };
                edges.push((t, other));
                extra += 1;
            } else {
                edges.push((a, b));
            }
        }
        edges.extend([(0, 10), (10, 11), (11, 0)]);
        let g = MultiGraph::new(12, &edges).unwrap();
        assert!(g.validate().is_ok());
        let out = colour_graph(&g).unwrap();
        assert_eq!(out.reductions, vec![ReductionKind::Triangle]);
        assert_eq!(out.branch, Branch::Constructed);
        assert_eq!(out.medium, 8);
        assert!(out.strictly_within_bound());
    }

    #[test]
    fn invalid_input_is_rejected() {
        let g = MultiGraph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert!(matches!(colour_graph(&g), Err(Error::InvalidGraph(_))));
    }
}
