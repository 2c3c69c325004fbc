use std::collections::BTreeSet;

use proptest::prelude::*;

use medium_colouring::colouring::{
    audit_bullets, check_proper, colour_graph, construct_colouring, medium_count, EdgeColouring,
};
use medium_colouring::corpus::{bridgeless_cubic_up_to, insert_edge};
use medium_colouring::discharge::{discharge_and_audit, Tenths};
use medium_colouring::factor::{
    choose_two_factor, enumerate_perfect_matchings, two_factor_from_matching,
};
use medium_colouring::graph::find_bridges;
use medium_colouring::graph::named::triple_edge;
use medium_colouring::io::{
    parse_colouring, parse_edge_list, parse_graph6, to_edge_list, to_graph6, write_colouring,
};
use medium_colouring::oracle::{min_medium_exact, min_medium_exact_with, OracleOptions};
use medium_colouring::petersen::is_petersen_graph;
use medium_colouring::reduce::{find_triangle, lift, reduce_multi_edge, reduce_triangle};
use medium_colouring::selection::{check_selection, find_optimal_selection, s_components};
use medium_colouring::MultiGraph;

/// A bridgeless cubic multigraph grown from the triple edge by edge
/// insertions, with shuffled vertex labels.
fn multigraph(max_insertions: usize) -> impl Strategy<Value = MultiGraph> {
    prop::collection::vec((any::<usize>(), any::<usize>()), 0..=max_insertions)
        .prop_flat_map(|steps| {
            let mut g = triple_edge();
            for (a, b) in steps {
                let m = g.size();
                let e = a % m;
                let f = e + b % (m - e);
                g = insert_edge(&g, e, f);
            }
            let n = g.order();
            (Just(g), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
        })
        .prop_map(|(g, perm)| g.relabel(&perm).unwrap())
}

/// A corpus graph on at most 12 vertices with shuffled labels.
fn simple_graph() -> impl Strategy<Value = MultiGraph> {
    let corpus = bridgeless_cubic_up_to(12).unwrap();
    (0..corpus.len())
        .prop_flat_map(move |i| {
            let g = corpus[i].clone();
            let n = g.order();
            (Just(g), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
        })
        .prop_map(|(g, perm)| g.relabel(&perm).unwrap())
}

fn shuffled_colours(g: &MultiGraph, c: &EdgeColouring, perm: &[u8]) -> EdgeColouring {
    let colours = c.colours().iter().map(|&x| perm[x as usize - 1]).collect();
    EdgeColouring::new(g, 4, colours).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn insertion_keeps_graphs_valid_and_bridges_match_brute_force(g in multigraph(7)) {
        prop_assert!(g.validate().is_ok());
        let bridges = find_bridges(&g).unwrap();
        for e in g.edge_ids() {
            let rest: Vec<_> = g.edge_ids().filter(|&f| f != e).map(|f| g.ends(f)).collect();
            let h = MultiGraph::new(g.order(), &rest).unwrap();
            prop_assert_eq!(bridges.contains(&e), !h.is_connected());
        }
    }

    #[test]
    fn edge_adjacency_is_symmetric(g in multigraph(7)) {
        for e in g.edge_ids() {
            let n = g.adjacent_edges(e).unwrap().adjacent;
            prop_assert!(n.len() <= 4 && !n.contains(&e));
            for f in n {
                prop_assert!(g.adjacent_edges(f).unwrap().adjacent.contains(&e));
            }
        }
    }

    #[test]
    fn pipeline_colouring_is_proper_and_within_the_bound(g in multigraph(7)) {
        let out = colour_graph(&g).unwrap();
        prop_assert!(check_proper(&g, out.colouring.colours()).is_ok());
        prop_assert_eq!(out.medium, medium_count(&g, &out.colouring));
        let (five_m, four_n) = (5 * out.medium, 4 * g.order());
        let holds = if is_petersen_graph(&g) { five_m <= four_n } else { five_m < four_n };
        prop_assert!(holds);
    }

    #[test]
    fn pipeline_on_relabelled_corpus_graphs(g in simple_graph()) {
        let out = colour_graph(&g).unwrap();
        prop_assert!(check_proper(&g, out.colouring.colours()).is_ok());
        prop_assert!(out.bound_holds());
    }

    #[test]
    fn text_formats_round_trip(g in multigraph(6), perm in Just(vec![1u8, 2, 3, 4]).prop_shuffle(), seed in any::<u64>()) {
        prop_assert_eq!(parse_edge_list(&to_edge_list(&g)).unwrap(), g.clone());
        if g.is_simple() {
            let s = to_graph6(&g).unwrap();
            prop_assert_eq!(to_graph6(&parse_graph6(&s).unwrap()).unwrap(), s);
        }
        let c = shuffled_colours(&g, &colour_graph(&g).unwrap().colouring, &perm);
        let text = write_colouring(&g, &c);
        let mut lines: Vec<&str> = text.lines().collect();
        let k = lines.len();
        lines.rotate_left(seed as usize % k);
        lines.swap(0, (seed as usize / 7) % k);
        let back = parse_colouring(&g, &lines.join("\n")).unwrap();
        prop_assert_eq!(medium_count(&g, &back), medium_count(&g, &c));
        for e in g.edge_ids() {
            let (u, v) = g.ends(e);
            let mult: BTreeSet<u8> = g.edges_between(u, v).iter().map(|&f| c.colour(f)).collect();
            prop_assert!(mult.contains(&back.colour(e)));
        }
    }

    #[test]
    fn optimal_selection_is_valid_and_partitioned(g in simple_graph()) {
        let tf = choose_two_factor(&g, 10_000).unwrap();
        let s = find_optimal_selection(&g, &tf);
        prop_assert!(check_selection(&g, &tf, &s.selected).is_ok());
        let comps = s_components(&g, &tf, &s);
        let mut seen = BTreeSet::new();
        for k in &comps {
            for &e in &k.associated_edges {
                prop_assert!(seen.insert(e));
            }
        }
        prop_assert_eq!(seen, s.selected.clone());
        let covered: usize = comps.iter().map(|k| k.cycles.len()).sum();
        prop_assert_eq!(covered, tf.cycles.len());
    }

    #[test]
    fn construction_audits_pass_on_any_two_factor(g in simple_graph(), pick in any::<usize>()) {
        prop_assume!(find_triangle(&g).is_none());
        let matchings = enumerate_perfect_matchings(&g, 10_000).unwrap();
        let tf = two_factor_from_matching(&g, &matchings[pick % matchings.len()]).unwrap();
        let s = find_optimal_selection(&g, &tf);
        let c = construct_colouring(&g, &tf, &s).unwrap();
        prop_assert!(audit_bullets(&g, &tf, &s, &c).unwrap().passed());
        let (ledger, report) = discharge_and_audit(&g, &tf, &s, &c).unwrap();
        prop_assert!(report.passed, "{:?}", report.first_failure);
        for snap in &ledger.snapshots {
            prop_assert_eq!(snap.total(), Tenths::units(ledger.medium));
        }
    }

    #[test]
    fn lifting_keeps_colourings_proper_and_medium_counts_equal(
        g in multigraph(6),
        perm in Just(vec![1u8, 2, 3, 4]).prop_shuffle(),
    ) {
        let step = match reduce_multi_edge(&g) {
            Ok(Some(r)) => Some(r),
            Ok(None) => reduce_triangle(&g).unwrap(),
            Err(_) => None,
        };
        prop_assume!(step.is_some());
        let (h, record) = step.unwrap();
        let c = shuffled_colours(&h, &colour_graph(&h).unwrap().colouring, &perm);
        let lifted = lift(&record, &h, &c).unwrap();
        prop_assert!(check_proper(&g, lifted.colours()).is_ok());
        prop_assert_eq!(medium_count(&g, &lifted), medium_count(&h, &c));
    }

    #[test]
    fn tenths_display_is_exact(x in -100_000i64..100_000) {
        let shown = Tenths(x).to_string();
        let parsed: f64 = shown.parse().unwrap();
        prop_assert_eq!((parsed * 10.0).round() as i64, x);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn oracle_is_monotone_in_the_palette_and_below_the_pipeline(g in multigraph(3)) {
        let mins: Vec<usize> = (4..=6).map(|k| min_medium_exact(&g, k).unwrap().0).collect();
        prop_assert!(mins.windows(2).all(|w| w[1] <= w[0]));
        prop_assert!(mins[0] <= colour_graph(&g).unwrap().medium);
        let plain = min_medium_exact_with(&g, 4, OracleOptions { symmetry_breaking: false }).unwrap().0;
        prop_assert_eq!(plain, mins[0]);
    }
}
