use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use medium_colouring::colouring::{colour_graph_with, is_normal, ClassCounts, PipelineOptions};
use medium_colouring::corpus::bridgeless_simple_up_to;
use medium_colouring::discharge::AuditReport;
use medium_colouring::io::{parse_colouring, parse_graph, parse_graph6_many, to_graph6};
use medium_colouring::oracle::{exists_normal, min_medium_exact, verify_conjecture_on};
use medium_colouring::petersen::{
    build_kneser_petersen, classify_petersen_colouring, describe_edge, normal_to_petersen,
    PetersenClass,
};
use medium_colouring::report::{audit_outcome, ColouringReport, OracleComparison};
use medium_colouring::{Error, MultiGraph};

/// Four-edge-colourings of bridgeless cubic graphs with few medium edges.
#[derive(Parser)]
#[command(name = "medcol", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Colour a graph and report the medium count against 4n/5.
    Colour {
        graph: PathBuf,
        /// Also write the colouring as `u v colour` lines.
        #[arg(long, value_name = "FILE")]
        write: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Classify the edges of a given colouring.
    Verify {
        graph: PathBuf,
        colouring: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Exhaustive search over proper k-edge-colourings.
    Oracle {
        graph: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u8).range(3..=6))]
        k: u8,
        /// Minimum number of medium edges (the default).
        #[arg(long, conflicts_with = "exists_normal")]
        min_medium: bool,
        /// Find a colouring without medium edges.
        #[arg(long)]
        exists_normal: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Colour a graph and audit the charge-counting argument on it.
    Audit {
        graph: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Process every graph in a graph6 file.
    Batch {
        file: PathBuf,
        /// Cross-check small graphs with the exhaustive oracle.
        #[arg(long)]
        oracle: bool,
        /// Largest order the oracle is run on.
        #[arg(long, default_value_t = 12)]
        oracle_max_order: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Map a normal 5-edge-colouring to a Petersen colouring.
    PetersenMap {
        graph: PathBuf,
        colouring: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Write the bridgeless cubic corpus as graph6 files.
    Generate {
        dir: PathBuf,
        #[arg(long, default_value_t = 14)]
        max_order: usize,
    },
}

/// Exit status 1: a bound or audit failed. Exit status 2: bad input.
enum Failure {
    Violation(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BoundViolation { .. } | Error::Invariant(_) => Failure::Violation(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> std::result::Result<MultiGraph, Failure> {
    let g = parse_graph(&read(path)?)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    g.require_valid()?;
    Ok(g)
}

fn name_of(path: &Path) -> String {
    path.file_stem().map_or_else(
        || path.display().to_string(),
        |s| s.to_string_lossy().into_owned(),
    )
}

fn emit<T: Serialize>(json: bool, value: &T, text: impl FnOnce() -> String) {
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(value).expect("serialisable")
        );
    } else {
        print!("{}", text());
    }
}

fn colour_report(
    name: &str,
    g: &MultiGraph,
) -> medium_colouring::Result<(ColouringReport, Option<AuditReport>)> {
    let options = PipelineOptions {
        enforce_bound: false,
        ..PipelineOptions::default()
    };
    let outcome = colour_graph_with(g, options)?;
    let audit = audit_outcome(&outcome)?;
    let report = ColouringReport::new(name, g, &outcome, audit.as_ref());
    Ok((report, audit))
}

fn verdict(report: &ColouringReport) -> Outcome {
    if !report.bound.holds {
        return Err(Failure::Violation(format!(
            "{}: {} medium edges on {} vertices breaks the 4n/5 bound",
            report.graph, report.bound.medium, report.order
        )));
    }
    if report.audit.as_ref().is_some_and(|a| !a.passed) {
        return Err(Failure::Violation(format!(
            "{}: discharging audit failed",
            report.graph
        )));
    }
    Ok(())
}

fn cmd_colour(path: &Path, write: Option<&Path>, json: bool) -> Outcome {
    let g = load_graph(path)?;
    let (report, _) = colour_report(&name_of(path), &g)?;
    if let Some(out) = write {
        let text = report
            .colours
            .iter()
            .map(|[u, v, c]| format!("{u} {v} {c}\n"))
            .collect::<String>();
        fs::write(out, text).map_err(|e| Failure::Input(format!("{}: {e}", out.display())))?;
    }
    emit(json, &report, || report.render_text());
    verdict(&report)
}

#[derive(Serialize)]
struct VerifyReport {
    graph: String,
    palette: u8,
    colours_used: usize,
    counts: ClassCounts,
    normal: bool,
    medium_edges: Vec<[usize; 2]>,
}

fn cmd_verify(graph: &Path, colouring: &Path, json: bool) -> Outcome {
    let g = load_graph(graph)?;
    let c = parse_colouring(&g, &read(colouring)?)?;
    let medium_edges = medium_colouring::colouring::medium_edges(&g, &c)
        .into_iter()
        .map(|e| {
            let (u, v) = g.ends(e);
            [u, v]
        })
        .collect();
    let r = VerifyReport {
        graph: name_of(graph),
        palette: c.palette(),
        colours_used: c.colours_used(),
        counts: ClassCounts::of(&g, &c),
        normal: is_normal(&g, &c),
        medium_edges,
    };
    emit(json, &r, || {
        format!(
            "graph {}: proper colouring with {} colours\npoor {}, medium {}, rich {}\nnormal: {}\n",
            r.graph,
            r.colours_used,
            r.counts.poor,
            r.counts.medium,
            r.counts.rich,
            if r.normal { "yes" } else { "no" }
        )
    });
    Ok(())
}

#[derive(Serialize)]
struct OracleReport {
    graph: String,
    k: u8,
    query: &'static str,
    min_medium: Option<usize>,
    normal_exists: Option<bool>,
    /// All edges rich.
    strong: Option<bool>,
    colours: Option<Vec<[usize; 3]>>,
}

fn cmd_oracle(path: &Path, k: u8, exists: bool, json: bool) -> Outcome {
    let g = load_graph(path)?;
    let triples = |c: &medium_colouring::colouring::EdgeColouring| {
        g.edge_ids()
            .map(|e| {
                let (u, v) = g.ends(e);
                [u, v, c.colour(e) as usize]
            })
            .collect::<Vec<_>>()
    };
    let r = if exists {
        let found = exists_normal(&g, k)?;
        OracleReport {
            graph: name_of(path),
            k,
            query: "exists_normal",
            min_medium: None,
            normal_exists: Some(found.is_some()),
            strong: found
                .as_ref()
                .map(|c| ClassCounts::of(&g, c).rich == g.size()),
            colours: found.as_ref().map(triples),
        }
    } else {
        let (n, c) = match min_medium_exact(&g, k) {
            Ok((n, c)) => (Some(n), Some(c)),
            Err(Error::NoColouring(_)) => (None, None),
            Err(e) => return Err(e.into()),
        };
        OracleReport {
            graph: name_of(path),
            k,
            query: "min_medium",
            min_medium: n,
            normal_exists: None,
            strong: None,
            colours: c.as_ref().map(triples),
        }
    };
    emit(json, &r, || {
        let mut s = format!("graph {}, k = {k}\n", r.graph);
        match (r.query, r.min_medium, r.normal_exists) {
            ("min_medium", Some(n), _) => s += &format!("minimum medium edges: {n}\n"),
            ("min_medium", None, _) => s += "no proper colouring with k colours\n",
            (_, _, Some(true)) => {
                s += "normal colouring found";
                s += if r.strong == Some(true) {
                    " (strong: every edge rich)\n"
                } else {
                    "\n"
                };
            }
            _ => s += "no normal colouring\n",
        }
        if let Some(cs) = &r.colours {
            for [u, v, c] in cs {
                s += &format!("{u} {v} {c}\n");
            }
        }
        s
    });
    Ok(())
}

fn cmd_audit(path: &Path, json: bool) -> Outcome {
    let g = load_graph(path)?;
    let (report, audit) = colour_report(&name_of(path), &g)?;
    #[derive(Serialize)]
    struct Full<'a> {
        report: &'a ColouringReport,
        audit: Option<&'a AuditReport>,
    }
    let full = Full {
        report: &report,
        audit: audit.as_ref(),
    };
    emit(json, &full, || {
        let mut s = report.render_text();
        match &audit {
            None => s += "no construction step: the colouring came from a 3-edge-colouring\n",
            Some(a) => {
                for c in &a.checks {
                    let mark = match (c.passed, c.advisory) {
                        (true, _) => "ok  ",
                        (false, true) => "note",
                        (false, false) => "FAIL",
                    };
                    s += &format!("{mark} {}", c.name);
                    if !c.detail.is_empty() {
                        s += &format!(": {}", c.detail);
                    }
                    s.push('\n');
                }
                for cy in &a.cycles {
                    s += &format!(
                        "cycle {} (length {}, S-degree {}): R0 {}, R1 {}, final {}\n",
                        cy.index, cy.length, cy.s_degree, cy.after_r0, cy.after_r1, cy.final_charge
                    );
                }
                s += &format!("total charge {} for {} medium edges\n", a.total, a.medium);
            }
        }
        s
    });
    verdict(&report)
}

#[derive(Serialize)]
struct BatchEntry {
    index: usize,
    report: Option<ColouringReport>,
    error: Option<String>,
    conjecture_holds: Option<bool>,
}

#[derive(Serialize, Default)]
struct BatchSummary {
    graphs: usize,
    input_errors: usize,
    bound_violations: usize,
    audit_failures: usize,
    petersen_detections: usize,
    constructed: usize,
    /// Largest `medium / n` as `[medium, n]`.
    max_ratio: Option<[usize; 2]>,
    oracle_checked: usize,
    oracle_exceeds_pipeline: usize,
    conjecture_failures: usize,
}

fn batch_one(index: usize, g: &MultiGraph, oracle: bool, max_order: usize) -> BatchEntry {
    let fail = |e: Error| BatchEntry {
        index,
        report: None,
        error: Some(e.to_string()),
        conjecture_holds: None,
    };
    if let Err(e) = g.require_valid() {
        return fail(e);
    }
    let (mut report, _) = match colour_report(&format!("#{index}"), g) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    let mut conjecture_holds = None;
    if oracle && g.order() <= max_order {
        match min_medium_exact(g, 4) {
            Ok((n, _)) => {
                report.oracle = Some(OracleComparison {
                    k: 4,
                    min_medium: n,
                    pipeline_medium: report.bound.medium,
                })
            }
            Err(e) => return fail(e),
        }
        match verify_conjecture_on(g) {
            Ok(c) => conjecture_holds = Some(c.holds && c.petersen_round_trip == Some(true)),
            Err(e) => return fail(e),
        }
    }
    BatchEntry {
        index,
        report: Some(report),
        error: None,
        conjecture_holds,
    }
}

fn cmd_batch(path: &Path, oracle: bool, max_order: usize, json: bool) -> Outcome {
    let graphs = parse_graph6_many(&read(path)?)?;
    let entries: Vec<BatchEntry> = graphs
        .par_iter()
        .enumerate()
        .map(|(i, g)| batch_one(i, g, oracle, max_order))
        .collect();
    let mut sum = BatchSummary {
        graphs: entries.len(),
        ..BatchSummary::default()
    };
    for e in &entries {
        let Some(r) = &e.report else {
            sum.input_errors += 1;
            continue;
        };
        sum.bound_violations += usize::from(!r.bound.holds);
        sum.audit_failures += usize::from(r.audit.as_ref().is_some_and(|a| !a.passed));
        sum.petersen_detections += usize::from(r.is_petersen);
        sum.constructed += usize::from(r.audit.is_some());
        let ratio = [r.bound.medium, r.order];
        if sum
            .max_ratio
            .is_none_or(|[m, n]| ratio[0] * n > m * ratio[1])
        {
            sum.max_ratio = Some(ratio);
        }
        if let Some(o) = &r.oracle {
            sum.oracle_checked += 1;
            sum.oracle_exceeds_pipeline += usize::from(o.min_medium > o.pipeline_medium);
        }
        sum.conjecture_failures += usize::from(e.conjecture_holds == Some(false));
    }
    #[derive(Serialize)]
    struct Batch<'a> {
        summary: &'a BatchSummary,
        graphs: &'a [BatchEntry],
    }
    emit(
        json,
        &Batch {
            summary: &sum,
            graphs: &entries,
        },
        || {
            let mut s = String::new();
            for e in &entries {
                match (&e.report, &e.error) {
                    (Some(r), _) => {
                        s += &format!(
                            "{}: n = {}, medium {}, bound {}{}{}\n",
                            e.index,
                            r.order,
                            r.bound.medium,
                            if r.bound.holds { "ok" } else { "VIOLATED" },
                            if r.is_petersen { ", Petersen" } else { "" },
                            r.oracle.map_or(String::new(), |o| format!(
                                ", oracle minimum {}",
                                o.min_medium
                            )),
                        );
                    }
                    (None, err) => {
                        s += &format!("{}: error: {}\n", e.index, err.as_deref().unwrap_or(""))
                    }
                }
            }
            s += &format!(
            "{} graphs, {} constructed, {} Petersen, {} bound violations, {} audit failures, {} input errors\n",
            sum.graphs, sum.constructed, sum.petersen_detections, sum.bound_violations,
            sum.audit_failures, sum.input_errors
        );
            if let Some([m, n]) = sum.max_ratio {
                s += &format!("largest medium/n: {m}/{n}\n");
            }
            if oracle {
                s += &format!(
                    "oracle: {} checked, {} above the pipeline, {} conjecture failures\n",
                    sum.oracle_checked, sum.oracle_exceeds_pipeline, sum.conjecture_failures
                );
            }
            s
        },
    );
    if sum.bound_violations
        + sum.audit_failures
        + sum.oracle_exceeds_pipeline
        + sum.conjecture_failures
        > 0
    {
        return Err(Failure::Violation("batch found violations".into()));
    }
    if sum.input_errors > 0 {
        return Err(Failure::Input(format!(
            "{} graphs were rejected",
            sum.input_errors
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct PetersenMapReport {
    graph: String,
    /// `[u, v, petersen edge]` per edge.
    assignment: Vec<[usize; 3]>,
    class: PetersenClass,
}

fn cmd_petersen_map(graph: &Path, colouring: &Path, json: bool) -> Outcome {
    let g = load_graph(graph)?;
    let c = parse_colouring(&g, &read(colouring)?)?;
    let pc = normal_to_petersen(&g, &c)?;
    let p = build_kneser_petersen();
    let r = PetersenMapReport {
        graph: name_of(graph),
        assignment: g
            .edge_ids()
            .map(|e| {
                let (u, v) = g.ends(e);
                [u, v, pc.assignment[e]]
            })
            .collect(),
        class: classify_petersen_colouring(&pc),
    };
    emit(json, &r, || {
        let mut s = String::new();
        for &[u, v, x] in &r.assignment {
            s += &format!("{u} {v} -> {}\n", describe_edge(&p, x));
        }
        s += &match &r.class {
            PetersenClass::Trivial { centre } => {
                let [a, b] = p.subsets[*centre];
                format!("trivial: every image meets {{{a},{b}}}\n")
            }
            PetersenClass::Surjective => "surjective\n".to_string(),
            PetersenClass::Neither { image } => {
                format!(
                    "neither trivial nor surjective ({} image edges)\n",
                    image.len()
                )
            }
        };
        s
    });
    Ok(())
}

fn cmd_generate(dir: &Path, max_order: usize) -> Outcome {
    let io_err = |e: std::io::Error| Failure::Input(format!("{}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io_err)?;
    for (n, graphs) in bridgeless_simple_up_to(max_order) {
        let mut text = String::new();
        for g in &graphs {
            text += &to_graph6(g)?;
            text.push('\n');
        }
        fs::write(dir.join(format!("cubic{n}.g6")), text).map_err(io_err)?;
        println!("n = {n}: {} graphs", graphs.len());
    }
    let p = to_graph6(&medium_colouring::graph::named::petersen())? + "\n";
    fs::write(dir.join("petersen.g6"), p).map_err(io_err)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Colour { graph, write, out } => cmd_colour(graph, write.as_deref(), out.json),
        Command::Verify {
            graph,
            colouring,
            out,
        } => cmd_verify(graph, colouring, out.json),
        Command::Oracle {
            graph,
            k,
            exists_normal,
            out,
            ..
        } => cmd_oracle(graph, *k, *exists_normal, out.json),
        Command::Audit { graph, out } => cmd_audit(graph, out.json),
        Command::Batch {
            file,
            oracle,
            oracle_max_order,
            out,
        } => cmd_batch(file, *oracle, *oracle_max_order, out.json),
        Command::PetersenMap {
            graph,
            colouring,
            out,
        } => cmd_petersen_map(graph, colouring, out.json),
        Command::Generate { dir, max_order } => cmd_generate(dir, *max_order),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violation(msg)) => {
            eprintln!("medcol: VIOLATION: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("medcol: {msg}");
            ExitCode::from(2)
        }
    }
}
