mod common;

use std::collections::BTreeSet;

use common::{arb_graph, arb_permuted, automorphisms, connected_corpus};
use proptest::prelude::*;
use snc_core::canonical::{edge_orbit_representatives, key_from_components};
use snc_core::{are_isomorphic, canonical_form, canonical_key, CanonicalKey, EdgeRef, LoopyMultigraph};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn relabeling_keeps_the_key((g, h) in arb_permuted(9, 14)) {
        prop_assert_eq!(canonical_key(&g), canonical_key(&h));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn key_equality_is_isomorphism(a in arb_graph(8, 12), b in arb_graph(8, 12)) {
        prop_assert_eq!(canonical_key(&a) == canonical_key(&b), are_isomorphic(&a, &b));
    }

    #[test]
    fn same_shape_pairs_agree_with_isomorphism(
        n in 3u32..=8,
        e in prop::collection::vec((0u32..8, 0u32..8), 4..=12),
        f in prop::collection::vec((0u32..8, 0u32..8), 4..=12),
    ) {
        // same vertex and edge count makes near-misses likely
        let len = e.len().min(f.len());
        let a = LoopyMultigraph::from_edges(e[..len].iter().map(|&(u, v)| (u % n, v % n)));
        let b = LoopyMultigraph::from_edges(f[..len].iter().map(|&(u, v)| (u % n, v % n)));
        prop_assert_eq!(canonical_key(&a) == canonical_key(&b), are_isomorphic(&a, &b));
    }

    #[test]
    fn key_round_trips(g in arb_graph(9, 14)) {
        let k = canonical_key(&g);
        let back = CanonicalKey::from_bytes(k.as_bytes()).unwrap();
        prop_assert_eq!(&back, &k);
        let rebuilt = k.to_graph();
        prop_assert!(are_isomorphic(&rebuilt, &g));
        prop_assert_eq!(canonical_key(&rebuilt), k);
    }

    #[test]
    fn union_key_is_the_component_merge(a in arb_graph(6, 8), b in arb_graph(6, 8)) {
        let u = a.disjoint_union(&b);
        let merged = key_from_components(&[canonical_key(&a), canonical_key(&b)]);
        prop_assert_eq!(canonical_key(&u), merged.clone());
        prop_assert_eq!(canonical_key(&b.disjoint_union(&a)), merged);
    }

    #[test]
    fn labeling_maps_onto_the_key(g in arb_graph(8, 12)) {
        let form = canonical_form(&g);
        let mut position = vec![u32::MAX; g.label_bound()];
        for (p, &orig) in form.labeling.iter().enumerate() {
            position[orig as usize] = p as u32;
        }
        let relabeled = g.relabel(|x| position[x as usize]);
        prop_assert_eq!(relabeled, form.key.to_graph());
    }
}

#[test]
fn isomorphism_classes_are_separated() {
    // every distinct class from the generated corpus must get a distinct key
    let graphs = connected_corpus(6);
    let keys: BTreeSet<_> = graphs.iter().map(canonical_key).collect();
    assert_eq!(keys.len(), graphs.len());
    for i in (0..graphs.len()).step_by(7) {
        for j in (i + 1..graphs.len()).step_by(13) {
            assert!(!are_isomorphic(&graphs[i], &graphs[j]));
        }
    }
}

fn brute_edge_orbits(g: &LoopyMultigraph) -> Vec<BTreeSet<EdgeRef>> {
    let autos = automorphisms(g);
    let mut seen = BTreeSet::new();
    let mut orbits = Vec::new();
    for c in g.edge_classes() {
        if seen.contains(&c.edge) {
            continue;
        }
        let (u, v) = c.edge.endpoints();
        let orbit: BTreeSet<EdgeRef> = autos
            .iter()
            .map(|p| EdgeRef::new(p[u as usize], p[v as usize]))
            .collect();
        seen.extend(orbit.iter().copied());
        orbits.push(orbit);
    }
    orbits
}

#[test]
fn orbit_representatives_match_automorphism_orbits() {
    for g in connected_corpus(6).into_iter().filter(|g| g.label_bound() <= 6) {
        let orbits = brute_edge_orbits(&g);
        let reps = edge_orbit_representatives(&g);
        assert_eq!(reps.len(), orbits.len(), "{:?}", g);
        for o in &orbits {
            assert_eq!(reps.iter().filter(|r| o.contains(r)).count(), 1, "{:?}", g);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn random_orbits_match(g in arb_graph(6, 9)) {
        let orbits = brute_edge_orbits(&g);
        let reps = edge_orbit_representatives(&g);
        prop_assert_eq!(reps.len(), orbits.len());
        for o in &orbits {
            prop_assert_eq!(reps.iter().filter(|r| o.contains(r)).count(), 1);
        }
    }
}
