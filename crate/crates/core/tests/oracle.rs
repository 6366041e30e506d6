mod common;

use common::{arb_graph, brute_value, corpus};
use proptest::prelude::*;
use snc_core::solver::{scores_from_value, Solver};
use snc_core::{solve, LoopyMultigraph, SolveOptions};

fn all_options() -> Vec<SolveOptions> {
    let mut out = Vec::new();
    for pruning in [true, false] {
        for memo in [true, false] {
            for orbit_dedup in [true, false] {
                out.push(SolveOptions {
                    pruning,
                    memo,
                    orbit_dedup,
                    ..SolveOptions::default()
                });
            }
        }
    }
    out
}

#[test]
fn corpus_matches_brute_force() {
    let graphs = corpus(7, 7);
    assert!(graphs.len() > 2_000, "corpus too small: {}", graphs.len());
    let mut solver = Solver::new(SolveOptions::default());
    for g in &graphs {
        let want = brute_value(g);
        let got = solver.solve(g).unwrap();
        assert_eq!(got.differential, want, "{:?}", g);
        let (p1, p2) = scores_from_value(g.vertex_count(), want).unwrap();
        assert_eq!((got.p1_score, got.p2_score), (p1, p2));
    }
}

#[test]
fn options_do_not_change_values() {
    let graphs = corpus(6, 5);
    let opts = all_options();
    for g in &graphs {
        let reference = brute_value(g);
        for o in &opts {
            assert_eq!(solve(g, o.clone()).unwrap().differential, reference, "{:?} under {:?}", g, o);
        }
    }
}

#[test]
fn best_move_realizes_value() {
    let mut solver = Solver::new(SolveOptions::default());
    for g in corpus(5, 4) {
        let (e, value) = solver.best_move(&g).unwrap();
        let out = g.remove_edge(e).unwrap();
        let rest = solver.value(&out.successor).unwrap();
        let realized = if out.captured > 0 { out.captured as i32 + rest } else { -rest };
        assert_eq!(realized, value.differential, "{:?} move {}", g, e);
    }
}

fn check_random(g: &LoopyMultigraph) -> Result<(), TestCaseError> {
    let want = brute_value(g);
    for o in all_options() {
        prop_assert_eq!(solve(g, o).unwrap().differential, want);
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn random_graphs_match_brute_force(g in arb_graph(7, 10)) {
        check_random(&g)?;
    }
}
