//! Replays the charge-counting argument on a constructed colouring.
//!
//! Every medium edge starts with charge 1. Rule R0 moves the charge of medium
//! cycle edges to their cycle, R1 moves the charge of medium matching edges
//! to the adjacent cycles, and R2 to R4 move fifths between cycles of length 5
//! and their neighbours. Charges are kept in integer tenths.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, AddAssign, Sub, SubAssign};

use serde::Serialize;

use crate::colouring::{class_from_colours, EdgeClass, EdgeColouring, COLOUR_ODD};
use crate::error::{Error, Result};
use crate::factor::TwoFactor;
use crate::graph::{EdgeId, MultiGraph, Vertex};
use crate::selection::{s_components, EdgeSelection, SComponent, Shape};

/// A charge in tenths: `Tenths(10)` is 1, `Tenths(5)` is 1/2, `Tenths(2)` is 1/5.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Tenths(pub i64);

impl Tenths {
    pub const ZERO: Tenths = Tenths(0);
    pub const ONE: Tenths = Tenths(10);
    pub const HALF: Tenths = Tenths(5);
    pub const FIFTH: Tenths = Tenths(2);

    pub fn units(n: usize) -> Tenths {
        Tenths(10 * n as i64)
    }
}

impl fmt::Display for Tenths {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let a = self.0.abs();
        if a % 10 == 0 {
            write!(f, "{sign}{}", a / 10)
        } else {
            write!(f, "{sign}{}.{}", a / 10, a % 10)
        }
    }
}

impl Add for Tenths {
    type Output = Tenths;
    fn add(self, rhs: Tenths) -> Tenths {
        Tenths(self.0 + rhs.0)
    }
}

impl Sub for Tenths {
    type Output = Tenths;
    fn sub(self, rhs: Tenths) -> Tenths {
        Tenths(self.0 - rhs.0)
    }
}

impl AddAssign for Tenths {
    fn add_assign(&mut self, rhs: Tenths) {
        self.0 += rhs.0;
    }
}

impl SubAssign for Tenths {
    fn sub_assign(&mut self, rhs: Tenths) {
        self.0 -= rhs.0;
    }
}

impl std::iter::Sum for Tenths {
    fn sum<I: Iterator<Item = Tenths>>(iter: I) -> Tenths {
        Tenths(iter.map(|t| t.0).sum())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Stage {
    Initial,
    R0,
    R1,
    R2,
    R3,
    R4,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Holder {
    Edge(EdgeId),
    Cycle(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Transfer {
    pub rule: Stage,
    pub source: Holder,
    /// Receiving cycle.
    pub target: usize,
    pub amount: Tenths,
    /// The vertex of the sending cycle the charge passes through (R2 to R4).
    pub via: Option<Vertex>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Snapshot {
    pub stage: Stage,
    pub edge_charge: Vec<Tenths>,
    pub cycle_charge: Vec<Tenths>,
}

impl Snapshot {
    pub fn total(&self) -> Tenths {
        self.edge_charge
            .iter()
            .chain(&self.cycle_charge)
            .copied()
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChargeLedger {
    pub edge_charge: Vec<Tenths>,
    pub cycle_charge: Vec<Tenths>,
    pub snapshots: Vec<Snapshot>,
    pub transfer_log: Vec<Transfer>,
    pub medium: usize,
}

impl ChargeLedger {
    /// Charge 1 on every medium edge, 0 elsewhere.
    pub fn new(g: &MultiGraph, tf: &TwoFactor, c: &EdgeColouring) -> Result<Self> {
        if c.len() != g.size() || tf.cycle_of_vertex.len() != g.order() {
            return Err(Error::Precondition(
                "ledger inputs describe different graphs".into(),
            ));
        }
        let edge_charge: Vec<Tenths> = g
            .edge_ids()
            .map(|e| match class_from_colours(g, c.colours(), e) {
                Some(EdgeClass::Medium) => Tenths::ONE,
                _ => Tenths::ZERO,
            })
            .collect();
        let medium = edge_charge.iter().filter(|&&t| t == Tenths::ONE).count();
        let cycle_charge = vec![Tenths::ZERO; tf.cycles.len()];
        let mut ledger = ChargeLedger {
            edge_charge,
            cycle_charge,
            snapshots: Vec::new(),
            transfer_log: Vec::new(),
            medium,
        };
        ledger.snapshot(Stage::Initial);
        Ok(ledger)
    }

    pub fn stage(&self) -> Stage {
        self.snapshots.last().expect("initial snapshot").stage
    }

    pub fn snapshot_at(&self, stage: Stage) -> Option<&Snapshot> {
        self.snapshots.iter().find(|s| s.stage == stage)
    }

    pub fn total(&self) -> Tenths {
        self.edge_charge
            .iter()
            .chain(&self.cycle_charge)
            .copied()
            .sum()
    }

    fn snapshot(&mut self, stage: Stage) {
        self.snapshots.push(Snapshot {
            stage,
            edge_charge: self.edge_charge.clone(),
            cycle_charge: self.cycle_charge.clone(),
        });
    }

    fn expect_stage(&self, stage: Stage) -> Result<()> {
        if self.stage() == stage {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "rule applied after {:?}, expected {:?}",
                self.stage(),
                stage
            )))
        }
    }

    fn transfer(&mut self, t: Transfer) {
        match t.source {
            Holder::Edge(e) => self.edge_charge[e] -= t.amount,
            Holder::Cycle(c) => self.cycle_charge[c] -= t.amount,
        }
        self.cycle_charge[t.target] += t.amount;
        self.transfer_log.push(t);
    }
}

fn is_medium(g: &MultiGraph, c: &EdgeColouring, e: EdgeId) -> bool {
    class_from_colours(g, c.colours(), e) == Some(EdgeClass::Medium)
}

/// R0: each medium cycle edge sends 1 to its cycle.
pub fn apply_r0(
    ledger: &mut ChargeLedger,
    g: &MultiGraph,
    tf: &TwoFactor,
    c: &EdgeColouring,
) -> Result<()> {
    ledger.expect_stage(Stage::Initial)?;
    for (index, cycle) in tf.cycles.iter().enumerate() {
        for &e in &cycle.edges {
            if is_medium(g, c, e) {
                ledger.transfer(Transfer {
                    rule: Stage::R0,
                    source: Holder::Edge(e),
                    target: index,
                    amount: Tenths::ONE,
                    via: None,
                });
            }
        }
    }
    ledger.snapshot(Stage::R0);
    Ok(())
}

/// The colour-3 edge of every odd cycle (`None` on even cycles).
fn three_edges(tf: &TwoFactor, c: &EdgeColouring) -> Result<Vec<Option<EdgeId>>> {
    tf.cycles
        .iter()
        .enumerate()
        .map(|(index, cycle)| {
            let threes: Vec<EdgeId> = cycle
                .edges
                .iter()
                .copied()
                .filter(|&e| c.colour(e) == COLOUR_ODD)
                .collect();
            match (cycle.is_odd(), threes.as_slice()) {
                (false, []) => Ok(None),
                (true, &[e]) => Ok(Some(e)),
                _ => Err(Error::Precondition(format!(
                    "cycle {index} carries {} edges of colour 3",
                    threes.len()
                ))),
            }
        })
        .collect()
}

/// R1: each medium matching edge `e` joining `C` and `C′`, where `C` is odd
/// with its colour-3 edge adjacent to `e`, sends 1/2 to both when `C′` is
/// even or has its colour-3 edge adjacent to `e` too, and 1 to `C` otherwise.
/// A medium chord sends 1 to its cycle.
pub fn apply_r1(
    ledger: &mut ChargeLedger,
    g: &MultiGraph,
    tf: &TwoFactor,
    c: &EdgeColouring,
) -> Result<()> {
    ledger.expect_stage(Stage::R0)?;
    let three = three_edges(tf, c)?;
    let touches_three =
        |v: Vertex| three[tf.cycle_of_vertex[v]].is_some_and(|t| g.is_incident(t, v));
    for &e in &tf.matching {
        if !is_medium(g, c, e) {
            continue;
        }
        let (x, y) = g.ends(e);
        let (cx, cy) = (tf.cycle_of_vertex[x], tf.cycle_of_vertex[y]);
        let send = |ledger: &mut ChargeLedger, target: usize, amount: Tenths| {
            ledger.transfer(Transfer {
                rule: Stage::R1,
                source: Holder::Edge(e),
                target,
                amount,
                via: None,
            })
        };
        let (ax, ay) = (touches_three(x), touches_three(y));
        if !ax && !ay {
            return Err(Error::Invariant(format!(
                "medium matching edge {e} is adjacent to no edge of colour 3"
            )));
        }
        if cx == cy {
            send(ledger, cx, Tenths::ONE);
            continue;
        }
        if ax && ay {
            send(ledger, cx, Tenths::HALF);
            send(ledger, cy, Tenths::HALF);
            continue;
        }
        let (own, other) = if ax { (cx, cy) } else { (cy, cx) };
        if tf.cycles[other].is_odd() {
            send(ledger, own, Tenths::ONE);
        } else {
            send(ledger, own, Tenths::HALF);
            send(ledger, other, Tenths::HALF);
        }
    }
    ledger.snapshot(Stage::R1);
    Ok(())
}

/// Firings of R2, R3 and R4, computed from `S` and the 2-factor alone.
pub fn r2_r3_r4_transfers(tf: &TwoFactor, s: &EdgeSelection) -> Vec<Transfer> {
    let is_five_deg = |cycle: usize, d: u8| tf.cycles[cycle].len() == 5 && s.degree(cycle) == d;
    let mut out = Vec::new();
    for (index, cycle) in tf.cycles.iter().enumerate() {
        if is_five_deg(index, 0) {
            for &v in &cycle.vertices {
                out.push(Transfer {
                    rule: Stage::R2,
                    source: Holder::Cycle(index),
                    target: tf.cycle_of_vertex[tf.partner[v]],
                    amount: Tenths::FIFTH,
                    via: Some(v),
                });
            }
        }
    }
    for (index, cycle) in tf.cycles.iter().enumerate() {
        if !is_five_deg(index, 1) {
            continue;
        }
        let a = tf.position[s.attachments(tf, index)[0]];
        for vi in [cycle.at(a + 4), cycle.at(a + 1)] {
            let d = tf.cycle_of_vertex[tf.partner[vi]];
            if !is_five_deg(d, 1) {
                out.push(Transfer {
                    rule: Stage::R3,
                    source: Holder::Cycle(index),
                    target: d,
                    amount: Tenths::FIFTH,
                    via: Some(vi),
                });
            }
        }
    }
    for (index, cycle) in tf.cycles.iter().enumerate() {
        if !is_five_deg(index, 1) {
            continue;
        }
        let a = tf.position[s.attachments(tf, index)[0]];
        for vi in [cycle.at(a + 4), cycle.at(a + 1)] {
            let w = tf.partner[vi];
            let d = tf.cycle_of_vertex[w];
            if !is_five_deg(d, 1) {
                continue;
            }
            let u2 = s.attachments(tf, d)[0];
            if tf.cycles[d].distance(tf.position[w], tf.position[u2]) != 2 {
                continue;
            }
            let target = tf.cycle_of_vertex[tf.partner[u2]];
            if s.degree(target) == 2 {
                out.push(Transfer {
                    rule: Stage::R4,
                    source: Holder::Cycle(index),
                    target,
                    amount: Tenths::FIFTH,
                    via: Some(vi),
                });
            }
        }
    }
    out
}

/// R2 to R4 as one wave; a snapshot is taken after each rule's transfers.
pub fn apply_r2_r3_r4(ledger: &mut ChargeLedger, tf: &TwoFactor, s: &EdgeSelection) -> Result<()> {
    ledger.expect_stage(Stage::R1)?;
    if s.degree_of_cycle.len() != tf.cycles.len() {
        return Err(Error::Precondition(
            "selection built for another 2-factor".into(),
        ));
    }
    let wave = r2_r3_r4_transfers(tf, s);
    for rule in [Stage::R2, Stage::R3, Stage::R4] {
        for t in wave.iter().filter(|t| t.rule == rule) {
            ledger.transfer(*t);
        }
        ledger.snapshot(rule);
    }
    Ok(())
}

/// All rules in order.
pub fn run_discharging(
    g: &MultiGraph,
    tf: &TwoFactor,
    s: &EdgeSelection,
    c: &EdgeColouring,
) -> Result<ChargeLedger> {
    let mut ledger = ChargeLedger::new(g, tf, c)?;
    apply_r0(&mut ledger, g, tf, c)?;
    apply_r1(&mut ledger, g, tf, c)?;
    apply_r2_r3_r4(&mut ledger, tf, s)?;
    Ok(ledger)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Advisory checks are reported but do not fail the audit.
    pub advisory: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleCharge {
    pub index: usize,
    pub length: usize,
    pub s_degree: u8,
    pub after_r0: Tenths,
    pub after_r1: Tenths,
    pub final_charge: Tenths,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentCharge {
    pub cycles: Vec<usize>,
    pub shape: Shape,
    pub vertices: usize,
    pub charge: Tenths,
    /// `4/5` of `vertices`.
    pub bound: Tenths,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub passed: bool,
    pub first_failure: Option<String>,
    pub medium: usize,
    pub total: Tenths,
    pub checks: Vec<Check>,
    pub cycles: Vec<CycleCharge>,
    pub components: Vec<ComponentCharge>,
    pub transfers: usize,
}

struct Checks(Vec<Check>);

impl Checks {
    fn add(&mut self, name: &str, failures: Vec<String>) {
        self.push(name, failures, false);
    }

    fn push(&mut self, name: &str, failures: Vec<String>, advisory: bool) {
        self.0.push(Check {
            name: name.to_string(),
            passed: failures.is_empty(),
            advisory,
            detail: failures.join("; "),
        });
    }
}

/// Verifies every charge bound on a fully discharged ledger.
pub fn audit(
    ledger: &ChargeLedger,
    g: &MultiGraph,
    tf: &TwoFactor,
    s: &EdgeSelection,
    c: &EdgeColouring,
) -> Result<AuditReport> {
    ledger.expect_stage(Stage::R4)?;
    let stages = [
        Stage::Initial,
        Stage::R0,
        Stage::R1,
        Stage::R2,
        Stage::R3,
        Stage::R4,
    ];
    let snap = |st| ledger.snapshot_at(st).expect("all stages recorded");
    let medium = Tenths::units(ledger.medium);
    let mut checks = Checks(Vec::new());

    checks.add(
        "medium_count",
        if ledger.medium == g.edge_ids().filter(|&e| is_medium(g, c, e)).count() {
            vec![]
        } else {
            vec!["ledger was built from another colouring".into()]
        },
    );

    checks.add(
        "conservation",
        stages
            .iter()
            .filter(|&&st| snap(st).total() != medium)
            .map(|&st| {
                format!(
                    "total {} after {st:?}, expected {}",
                    snap(st).total(),
                    medium
                )
            })
            .collect(),
    );

    checks.add(
        "edges_empty_after_r1",
        snap(Stage::R1)
            .edge_charge
            .iter()
            .enumerate()
            .filter(|&(_, &t)| t != Tenths::ZERO)
            .map(|(e, t)| format!("edge {e} holds {t}"))
            .collect(),
    );

    checks.add(
        "transfer_amounts",
        ledger
            .transfer_log
            .iter()
            .filter(|t| ![Tenths::ONE, Tenths::HALF, Tenths::FIFTH].contains(&t.amount))
            .map(|t| format!("{:?} moves {}", t.rule, t.amount))
            .collect(),
    );

    // Replaying the log from the initial state must reproduce each snapshot.
    let mut replay_failures = Vec::new();
    let mut edge = snap(Stage::Initial).edge_charge.clone();
    let mut cyc = snap(Stage::Initial).cycle_charge.clone();
    for &st in &stages[1..] {
        for t in ledger.transfer_log.iter().filter(|t| t.rule == st) {
            match t.source {
                Holder::Edge(e) => edge[e] -= t.amount,
                Holder::Cycle(k) => cyc[k] -= t.amount,
            }
            cyc[t.target] += t.amount;
        }
        if edge != snap(st).edge_charge || cyc != snap(st).cycle_charge {
            replay_failures.push(format!("log replay differs after {st:?}"));
        }
    }
    checks.add("log_replay", replay_failures);

    let r0 = &snap(Stage::R0).cycle_charge;
    let r1 = &snap(Stage::R1).cycle_charge;
    let fin = &snap(Stage::R4).cycle_charge;
    let len = |k: usize| tf.cycles[k].len() as i64;

    checks.add(
        "r0_cycle_charge",
        (0..tf.cycles.len())
            .filter(|&k| {
                r0[k]
                    != if tf.cycles[k].is_odd() {
                        Tenths(30)
                    } else {
                        Tenths::ZERO
                    }
            })
            .map(|k| format!("cycle {k} of length {} holds {} after R0", len(k), r0[k]))
            .collect(),
    );

    checks.add(
        "r1_cycle_bounds",
        (0..tf.cycles.len())
            .filter_map(|k| {
                let bound = if !tf.cycles[k].is_odd() {
                    Tenths(5 * len(k))
                } else {
                    match s.degree(k) {
                        0 => Tenths(50),
                        1 => Tenths(40),
                        _ => Tenths(35),
                    }
                };
                (r1[k] > bound).then(|| {
                    format!(
                        "cycle {k} (length {}, degree {}) holds {} > {} after R1",
                        len(k),
                        s.degree(k),
                        r1[k],
                        bound
                    )
                })
            })
            .collect(),
    );

    let components = s_components(g, tf, s);
    let medium_selected: BTreeSet<EdgeId> = s
        .selected
        .iter()
        .copied()
        .filter(|&e| is_medium(g, c, e))
        .collect();
    let mut final_failures = Vec::new();
    for comp in &components {
        let odd_cycle = comp.is_odd_cycle();
        for &k in &comp.cycles {
            let bound = if !tf.cycles[k].is_odd() {
                Tenths(7 * len(k))
            } else if odd_cycle {
                let touches = medium_selected.iter().any(|&e| {
                    let (a, b) = g.ends(e);
                    tf.cycle_of_vertex[a] == k || tf.cycle_of_vertex[b] == k
                });
                Tenths(if touches { 35 } else { 30 } + 2 * (len(k) - 2))
            } else {
                Tenths(8 * len(k))
            };
            if fin[k] > bound {
                final_failures.push(format!(
                    "cycle {k} (length {}, degree {}) ends with {} > {}",
                    len(k),
                    s.degree(k),
                    fin[k],
                    bound
                ));
            }
        }
    }
    checks.add("final_cycle_bounds", final_failures);

    let mut charges = Vec::new();
    let mut comp_failures = Vec::new();
    let mut comp_strict = Vec::new();
    let mut eq_last = Vec::new();
    for comp in &components {
        let cc = component_charge(comp, tf, fin);
        let all_five = comp.cycles.iter().all(|&k| len(k) == 5);
        if cc.charge > cc.bound {
            comp_failures.push(format!(
                "component {:?} holds {} > {}",
                cc.cycles, cc.charge, cc.bound
            ));
        }
        if !all_five && cc.charge == cc.bound {
            let even_singleton =
                comp.shape == Shape::Singleton && !tf.cycles[cc.cycles[0]].is_odd();
            let msg = format!(
                "component {:?} meets its bound {} with equality",
                cc.cycles, cc.bound
            );
            comp_strict.push((msg, even_singleton));
        }
        if comp.is_odd_cycle() {
            let t = comp.cycles.len() as i64;
            let sum: i64 = comp.cycles.iter().map(|&k| len(k)).sum();
            if 5 + 13 * t >= 3 * sum {
                eq_last.push(format!(
                    "component {:?}: 5 + 13·{t} is not below 3·{sum}",
                    cc.cycles
                ));
            }
        }
        charges.push(cc);
    }
    checks.add("component_bounds", comp_failures);
    checks.add(
        "component_strictness",
        comp_strict
            .iter()
            .filter(|(_, adv)| !adv)
            .map(|(m, _)| m.clone())
            .collect(),
    );
    checks.push(
        "even_cycle_strictness",
        comp_strict
            .iter()
            .filter(|(_, adv)| *adv)
            .map(|(m, _)| m.clone())
            .collect(),
        true,
    );
    checks.add("odd_cycle_component_inequality", eq_last);

    let n = g.order() as i64;
    let total = ledger.total();
    let all_five = tf.cycles.iter().all(|c| c.len() == 5);
    let mut global = Vec::new();
    if total > Tenths(8 * n) || (!all_five && total == Tenths(8 * n)) {
        global.push(format!("total {total} against 4/5 of {n} vertices"));
    }
    checks.add("global_bound", global);

    let cycles = (0..tf.cycles.len())
        .map(|k| CycleCharge {
            index: k,
            length: tf.cycles[k].len(),
            s_degree: s.degree(k),
            after_r0: r0[k],
            after_r1: r1[k],
            final_charge: fin[k],
        })
        .collect();
    let first_failure = checks
        .0
        .iter()
        .find(|c| !c.passed && !c.advisory)
        .map(|c| format!("{}: {}", c.name, c.detail));
    Ok(AuditReport {
        passed: first_failure.is_none(),
        first_failure,
        medium: ledger.medium,
        total,
        checks: checks.0,
        cycles,
        components: charges,
        transfers: ledger.transfer_log.len(),
    })
}

fn component_charge(comp: &SComponent, tf: &TwoFactor, fin: &[Tenths]) -> ComponentCharge {
    let vertices: usize = comp.cycles.iter().map(|&k| tf.cycles[k].len()).sum();
    ComponentCharge {
        cycles: comp.cycles.iter().copied().collect(),
        shape: comp.shape,
        vertices,
        charge: comp.cycles.iter().map(|&k| fin[k]).sum(),
        bound: Tenths(8 * vertices as i64),
    }
}

/// Discharges and audits in one call.
pub fn discharge_and_audit(
    g: &MultiGraph,
    tf: &TwoFactor,
    s: &EdgeSelection,
    c: &EdgeColouring,
) -> Result<(ChargeLedger, AuditReport)> {
    let ledger = run_discharging(g, tf, s, c)?;
    let report = audit(&ledger, g, tf, s, c)?;
    Ok((ledger, report))
}
