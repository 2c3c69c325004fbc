//! Per-graph reports for the command line, as text or JSON.

use std::fmt::Write as _;

use serde::Serialize;

use crate::colouring::{Branch, ClassCounts, PipelineOutcome};
use crate::discharge::{discharge_and_audit, AuditReport};
use crate::error::Result;
use crate::graph::MultiGraph;
use crate::reduce::ReductionKind;
use crate::selection::{s_components, Shape};

/// `5 · medium` against `4n`, so the comparison stays in integers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub medium: usize,
    pub order: usize,
    pub five_medium: usize,
    pub four_n: usize,
    pub within: bool,
    pub strict: bool,
    /// The bound holds, strictly unless the graph is the Petersen graph.
    pub holds: bool,
}

impl BoundCheck {
    pub fn new(medium: usize, order: usize, is_petersen: bool) -> Self {
        let (five_medium, four_n) = (5 * medium, 4 * order);
        BoundCheck {
            medium,
            order,
            five_medium,
            four_n,
            within: five_medium <= four_n,
            strict: five_medium < four_n,
            holds: if is_petersen {
                five_medium <= four_n
            } else {
                five_medium < four_n
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditSummary {
    pub passed: bool,
    pub first_failure: Option<String>,
    /// Total charge in tenths.
    pub total_tenths: i64,
    pub failed_checks: Vec<String>,
}

impl From<&AuditReport> for AuditSummary {
    fn from(a: &AuditReport) -> Self {
        AuditSummary {
            passed: a.passed,
            first_failure: a.first_failure.clone(),
            total_tenths: a.total.0,
            failed_checks: a
                .checks
                .iter()
                .filter(|c| !c.passed && !c.advisory)
                .map(|c| c.name.clone())
                .collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OracleComparison {
    pub k: u8,
    pub min_medium: usize,
    pub pipeline_medium: usize,
}

/// Every field is present for every graph; fields that do not apply are
/// `null`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColouringReport {
    pub graph: String,
    pub order: usize,
    pub size: usize,
    pub is_petersen: bool,
    pub branch: Branch,
    pub reductions: Vec<ReductionKind>,
    /// Cycle lengths of the 2-factor used by the construction.
    pub cycle_lengths: Option<Vec<usize>>,
    pub selection_size: Option<usize>,
    pub component_shapes: Option<Vec<Shape>>,
    /// `[u, v, colour]` per edge, in edge id order.
    pub colours: Vec<[usize; 3]>,
    pub counts: ClassCounts,
    pub bound: BoundCheck,
    pub audit: Option<AuditSummary>,
    pub oracle: Option<OracleComparison>,
}

/// The discharging audit of the construction step, when there was one.
pub fn audit_outcome(outcome: &PipelineOutcome) -> Result<Option<AuditReport>> {
    let Some(c) = &outcome.construction else {
        return Ok(None);
    };
    let (_, report) = discharge_and_audit(&c.graph, &c.two_factor, &c.selection, &c.colouring)?;
    Ok(Some(report))
}

impl ColouringReport {
    pub fn new(
        name: &str,
        g: &MultiGraph,
        outcome: &PipelineOutcome,
        audit: Option<&AuditReport>,
    ) -> Self {
        let construction = outcome.construction.as_ref();
        ColouringReport {
            graph: name.to_string(),
            order: g.order(),
            size: g.size(),
            is_petersen: outcome.is_petersen,
            branch: outcome.branch,
            reductions: outcome.reductions.clone(),
            cycle_lengths: construction.map(|c| c.two_factor.cycle_lengths()),
            selection_size: construction.map(|c| c.selection.len()),
            component_shapes: construction.map(|c| {
                s_components(&c.graph, &c.two_factor, &c.selection)
                    .iter()
                    .map(|k| k.shape)
                    .collect()
            }),
            colours: g
                .edge_ids()
                .map(|e| {
                    let (u, v) = g.ends(e);
                    [u, v, outcome.colouring.colour(e) as usize]
                })
                .collect(),
            counts: ClassCounts::of(g, &outcome.colouring),
            bound: BoundCheck::new(outcome.medium, g.order(), outcome.is_petersen),
            audit: audit.map(AuditSummary::from),
            oracle: None,
        }
    }

    /// poor + medium + rich = |E|, and the bound uses the same medium count.
    pub fn is_consistent(&self) -> bool {
        self.counts.total() == self.size
            && self.colours.len() == self.size
            && self.counts.medium == self.bound.medium
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "graph {}: n = {}, m = {}",
            self.graph, self.order, self.size
        );
        let branch = match (self.branch, self.reductions.is_empty()) {
            (Branch::ThreeColourable, true) => "3-edge-colourable".to_string(),
            (Branch::Constructed, true) => "constructed".to_string(),
            (b, false) => format!(
                "reduced ({} steps) then {}",
                self.reductions.len(),
                if b == Branch::Constructed {
                    "constructed"
                } else {
                    "3-edge-coloured"
                }
            ),
        };
        let _ = writeln!(out, "branch: {branch}");
        if self.is_petersen {
            let _ = writeln!(out, "the graph is the Petersen graph");
        }
        if let Some(lengths) = &self.cycle_lengths {
            let _ = writeln!(out, "2-factor cycle lengths: {lengths:?}");
        }
        if let (Some(size), Some(shapes)) = (self.selection_size, &self.component_shapes) {
            let shapes: Vec<String> = shapes.iter().map(Shape::to_string).collect();
            let _ = writeln!(out, "|S| = {size}, components: {}", shapes.join(", "));
        }
        let _ = writeln!(
            out,
            "poor {}, medium {}, rich {}",
            self.counts.poor, self.counts.medium, self.counts.rich
        );
        let b = &self.bound;
        let relation = if b.strict {
            "<"
        } else if b.within {
            "="
        } else {
            ">"
        };
        let _ = writeln!(
            out,
            "bound: 5*{} = {} {relation} {} = 4n: {}",
            b.medium,
            b.five_medium,
            b.four_n,
            if b.holds { "holds" } else { "VIOLATED" }
        );
        if let Some(a) = &self.audit {
            let _ = writeln!(
                out,
                "discharging audit: {}",
                if a.passed {
                    "passed".to_string()
                } else {
                    format!("FAILED {:?}", a.failed_checks)
                }
            );
        }
        if let Some(o) = &self.oracle {
            let _ = writeln!(out, "oracle (k = {}): minimum medium {}", o.k, o.min_medium);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colouring::colour_graph;
    use crate::graph::named::*;

    #[test]
    fn petersen_report() {
        let g = petersen();
        let out = colour_graph(&g).unwrap();
        let audit = audit_outcome(&out).unwrap().unwrap();
        let r = ColouringReport::new("petersen", &g, &out, Some(&audit));
        assert!(r.is_consistent());
        assert_eq!((r.bound.five_medium, r.bound.four_n), (40, 40));
        assert!(r.bound.holds && !r.bound.strict);
        assert_eq!(r.cycle_lengths, Some(vec![5, 5]));
        assert!(r.audit.as_ref().unwrap().passed);
        assert!(r.render_text().contains("40 = 40"));
    }

    #[test]
    fn json_fields_do_not_depend_on_the_branch() {
        let keys = |g: &MultiGraph| {
            let out = colour_graph(g).unwrap();
            let audit = audit_outcome(&out).unwrap();
            let r = ColouringReport::new("g", g, &out, audit.as_ref());
            let v = serde_json::to_value(&r).unwrap();
            v.as_object().unwrap().keys().cloned().collect::<Vec<_>>()
        };
        assert_eq!(keys(&complete4()), keys(&petersen()));
    }
}
