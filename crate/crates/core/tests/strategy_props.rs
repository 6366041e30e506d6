mod common;

use common::{arb_graph, connected_corpus};
use proptest::prelude::*;
use snc_core::families::doubled;
use snc_core::strategies::{
    best_response_value, mirror_policy, quadrant_mirror_policy, Actor, MirrorPairing, OptimalPolicy, Player,
    Policy, StrategyError,
};
use snc_core::{generate, solve, EdgeRef, FamilySpec, LoopyMultigraph, MoveOutcome, SolveOptions};

fn optimum(g: &LoopyMultigraph) -> i32 {
    solve(g, SolveOptions::default()).unwrap().differential
}

#[derive(Clone)]
struct LeastEdge;

impl Policy for LeastEdge {
    fn name(&self) -> &'static str {
        "least_edge"
    }
    fn choose(&mut self, g: &LoopyMultigraph) -> Result<EdgeRef, StrategyError> {
        Ok(g.edge_classes()[0].edge)
    }
    fn observe(&mut self, _: Actor, _: EdgeRef, _: &MoveOutcome) {}
    fn state_key(&self) -> Option<Vec<u8>> {
        Some(Vec::new())
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn optimal_policy_achieves_the_value(g in arb_graph(6, 8)) {
        let v = optimum(&g);
        prop_assert_eq!(best_response_value(&g, &OptimalPolicy::new(), Player::P1).unwrap(), v);
        prop_assert_eq!(best_response_value(&g, &OptimalPolicy::new(), Player::P2).unwrap(), v);
    }

    #[test]
    fn fixed_policies_never_beat_optimal(g in arb_graph(6, 9)) {
        let v = optimum(&g);
        prop_assert!(best_response_value(&g, &LeastEdge, Player::P1).unwrap() <= v);
        prop_assert!(best_response_value(&g, &LeastEdge, Player::P2).unwrap() >= v);
    }
}

#[test]
fn mirror_ties_every_small_doubled_graph() {
    let bases: Vec<LoopyMultigraph> = connected_corpus(5)
        .into_iter()
        .filter(|g| g.label_bound() <= 6 && g.vertices().all(|x| g.incident_count(x) >= 2))
        .collect();
    assert!(bases.len() > 20);
    for base in &bases {
        let last = base.label_bound() as u32 - 1;
        for b in [0, last] {
            let h = doubled(base, 0, b);
            let twins: Vec<_> = (0..=last).map(|x| (x, x + last + 1)).collect();
            let pairing = MirrorPairing::new(&h, EdgeRef::new(0, b + last + 1), &twins).unwrap();
            pairing.require_base_min_incident(&h).unwrap();
            let pol = mirror_policy(&h, &pairing);
            let v = best_response_value(&h, &pol, Player::P1).unwrap();
            assert!(v >= 0, "{:?}: mirror concedes {}", base, v);
            assert!(v <= optimum(&h));
        }
    }
}

#[test]
fn quadrant_mirror_on_k4_is_optimal() {
    let k4 = generate(&FamilySpec::Complete(4)).unwrap();
    let pol = quadrant_mirror_policy(1).unwrap();
    assert_eq!(best_response_value(&k4, &pol, Player::P2).unwrap(), -4);
}
