mod common;

use common::arb_graph;
use proptest::prelude::*;
use snc_core::{EdgeRef, LoopyMultigraph};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn moves_keep_incidence_consistent(g in arb_graph(8, 14), pick in any::<prop::sample::Index>()) {
        prop_assert_eq!(g.recount_incidence(), g.incidence().to_vec());
        let edges: Vec<EdgeRef> = g.edge_instances().collect();
        let e = edges[pick.index(edges.len())];
        let out = g.remove_edge(e).unwrap();
        let s = &out.successor;
        prop_assert_eq!(s.edge_count() + 1, g.edge_count());
        prop_assert_eq!(s.recount_incidence(), s.incidence().to_vec());
        prop_assert_eq!(out.captured as usize, g.vertex_count() - s.vertex_count());
        prop_assert_eq!(out.captured, g.capture_count(e));
        prop_assert_eq!(out.mover_moves_again, out.captured > 0 && !s.is_empty());
        for x in s.vertices() {
            prop_assert!(s.incident_count(x) > 0);
        }
        let (u, v) = e.endpoints();
        prop_assert_eq!(s.multiplicity(u, v) + 1, g.multiplicity(u, v));
    }

    #[test]
    fn absent_edge_is_rejected(g in arb_graph(6, 8)) {
        let far = g.label_bound() as u32 + 3;
        prop_assert!(g.remove_edge(EdgeRef::new(0, far)).is_err());
    }

    #[test]
    fn components_partition_the_vertices(g in arb_graph(9, 12)) {
        let comps = g.components();
        let mut all: Vec<u32> = comps.iter().flatten().copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, g.vertices().collect::<Vec<_>>());
        let edges: usize = comps.iter().map(|c| g.induced(c).edge_count()).sum();
        prop_assert_eq!(edges, g.edge_count());
    }

    #[test]
    fn union_adds_counts(a in arb_graph(6, 8), b in arb_graph(6, 8)) {
        let u = a.disjoint_union(&b);
        prop_assert_eq!(u.vertex_count(), a.vertex_count() + b.vertex_count());
        prop_assert_eq!(u.edge_count(), a.edge_count() + b.edge_count());
        prop_assert_eq!(u.components().len(), a.components().len() + b.components().len());
    }

    #[test]
    fn loops_count_once(n in 1u32..6, loops in 1u32..4) {
        let mut g = LoopyMultigraph::new();
        g.add_edges(0, 0, loops);
        for i in 1..n {
            g.add_edge(0, i);
        }
        prop_assert_eq!(g.incident_count(0), loops + n - 1);
        prop_assert_eq!(g.loops(0), loops);
    }

    #[test]
    fn distinct_moves_cover_classes(g in arb_graph(7, 10)) {
        let plain = g.distinct_moves(false);
        prop_assert_eq!(plain.len(), g.edge_classes().len());
        let dedup = g.distinct_moves(true);
        prop_assert!(!dedup.is_empty() && dedup.len() <= plain.len());
        for e in dedup {
            prop_assert!(plain.contains(&e));
        }
    }
}
