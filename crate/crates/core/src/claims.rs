//! Registry of checkable statements about specific game families.
//!
//! Each claim runs a fixed instance range through the solver (and through a
//! policy where the statement is constructive) and reports the first
//! violating instance, if any.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::canonical::canonical_key;
use crate::families::{doubled, generate, FamilySpec};
use crate::graph::{EdgeRef, LoopyMultigraph, Vertex};
use crate::solver::{SolveOptions, Solver};
use crate::strategies::{
    best_response_value, evaluate_policy, mirror_policy, quadrant_mirror_policy, MirrorPairing, Player,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClaimInfo {
    pub id: &'static str,
    pub statement: &'static str,
    /// Report-only claims always pass unless something is inconsistent.
    pub asserted: bool,
}

pub const CLAIMS: &[ClaimInfo] = &[
    ClaimInfo {
        id: "friendship_alternation",
        statement: "friendship F_n, n=1..8: P1 wins by 1 for even n, P2 wins by 3 for odd n",
        asserted: true,
    },
    ClaimInfo {
        id: "pinwheel_second_player",
        statement: "pinwheel PW_n, n=1..8: P2 wins",
        asserted: true,
    },
    ClaimInfo {
        id: "loopy_star_parity",
        statement: "loopy star, 2..13 vertices: P1 by 2 on even vertex counts, P2 by 3 on odd",
        asserted: true,
    },
    ClaimInfo {
        id: "double_loopy_star",
        statement: "L(n,2), n=1..12: tie at n=1, P2 by 1 at n=2, then P2 by 2 (n odd) or 3 (n even)",
        asserted: true,
    },
    ClaimInfo {
        id: "starlike_one_loop",
        statement: "L(n,1,5), n=2..3: P2 wins",
        asserted: true,
    },
    ClaimInfo {
        id: "starlike_two_loops",
        statement: "L(n,2,5), n=1..3: P1 wins for odd n, P2 for even n",
        asserted: true,
    },
    ClaimInfo {
        id: "starlike_three_loops",
        statement: "L(n,3,5), n=2..3: P2 wins; the single-branch case is reported",
        asserted: true,
    },
    ClaimInfo {
        id: "bipartite_star",
        statement: "K(1,b) and K(b,1), b=1..8: isomorphic to the star, P1 takes every vertex",
        asserted: true,
    },
    ClaimInfo {
        id: "bipartite_two",
        statement: "K(2,b) and K(b,2), b=1..8: P1 wins for odd b, P2 for even b",
        asserted: true,
    },
    ClaimInfo {
        id: "tree_first_player",
        statement: "every tree on 2..9 vertices: P1 takes every vertex",
        asserted: true,
    },
    ClaimInfo {
        id: "forest_first_player",
        statement: "every forest of two trees with 2..4 vertices each: P1 takes every vertex",
        asserted: true,
    },
    ClaimInfo {
        id: "cycle_second_player",
        statement: "C_n, n=3..12: P2 takes every vertex",
        asserted: true,
    },
    ClaimInfo {
        id: "cycle_union_ge8",
        statement: "C_8+C_8 and C_8+C_9: P2 wins",
        asserted: true,
    },
    ClaimInfo {
        id: "c5_loop_counterexample",
        statement: "C_5 with one loop is a P1 win; a second loop on a neighbour keeps it a P1 win, \
                    and removing the edge between the looped vertices is optimal",
        asserted: true,
    },
    ClaimInfo {
        id: "loop_addition",
        statement: "adding one loop to any vertex of a P2 win yields a P1 win",
        asserted: true,
    },
    ClaimInfo {
        id: "balloon_even_tie",
        statement: "BP_n, n in {4,6,8,10}: the mirror policy forces at least a tie for P1, and the value is a tie",
        asserted: true,
    },
    ClaimInfo {
        id: "doubled_tie",
        statement: "two copies of C_3, C_4, C_5 or K_4 joined by one edge: the mirror policy forces at least a tie",
        asserted: true,
    },
    ClaimInfo {
        id: "loopy_cycle_report",
        statement: "C_(n,k), n=4..10, k=1..3: winners reported, not asserted",
        asserted: false,
    },
    ClaimInfo {
        id: "quadrant_mirror_report",
        statement: "K_4 and K_8 under the quadrant mirror for P2: best response reported and checked against the optimum",
        asserted: false,
    },
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClaimReport {
    pub id: &'static str,
    pub passed: bool,
    pub instances: usize,
    /// First violating instance on failure, a summary otherwise.
    pub witness: String,
    /// Per-instance lines for report-only claims.
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnknownClaim(pub String);

impl fmt::Display for UnknownClaim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown claim '{}'; available:", self.0)?;
        for c in CLAIMS {
            write!(f, " {}", c.id)?;
        }
        Ok(())
    }
}

pub fn claim_info(id: &str) -> Option<&'static ClaimInfo> {
    CLAIMS.iter().find(|c| c.id == id)
}

pub fn verify_claim(id: &str) -> Result<ClaimReport, UnknownClaim> {
    let info = claim_info(id).ok_or_else(|| UnknownClaim(id.into()))?;
    let mut run = Run::new();
    let body: fn(&mut Run) = match info.id {
        "friendship_alternation" => friendship_alternation,
        "pinwheel_second_player" => pinwheel_second_player,
        "loopy_star_parity" => loopy_star_parity,
        "double_loopy_star" => double_loopy_star,
        "starlike_one_loop" => |r| starlike(r, 1, 2..=3, |_| -1),
        "starlike_two_loops" => |r| starlike(r, 2, 1..=3, |n| if n % 2 == 1 { 1 } else { -1 }),
        "starlike_three_loops" => starlike_three_loops,
        "bipartite_star" => bipartite_star,
        "bipartite_two" => bipartite_two,
        "tree_first_player" => tree_first_player,
        "forest_first_player" => forest_first_player,
        "cycle_second_player" => cycle_second_player,
        "cycle_union_ge8" => cycle_union_ge8,
        "c5_loop_counterexample" => c5_loop_counterexample,
        "loop_addition" => loop_addition,
        "balloon_even_tie" => balloon_even_tie,
        "doubled_tie" => doubled_tie,
        "loopy_cycle_report" => loopy_cycle_report,
        "quadrant_mirror_report" => quadrant_mirror_report,
        _ => unreachable!("registered claim without a body"),
    };
    body(&mut run);
    Ok(run.finish(info.id))
}

struct Run {
    solver: Solver,
    instances: usize,
    failure: Option<String>,
    notes: Vec<String>,
}

fn sign(v: i32) -> i32 {
    v.signum()
}

fn winner_word(v: i32) -> &'static str {
    match v.signum() {
        1 => "P1",
        -1 => "P2",
        _ => "Tie",
    }
}

impl Run {
    fn new() -> Self {
        Run {
            solver: Solver::new(SolveOptions::default()),
            instances: 0,
            failure: None,
            notes: Vec::new(),
        }
    }

    fn fail(&mut self, msg: String) {
        if self.failure.is_none() {
            self.failure = Some(msg);
        }
    }

    fn value(&mut self, label: &str, g: &LoopyMultigraph) -> Option<i32> {
        self.instances += 1;
        match self.solver.value(g) {
            Ok(v) => Some(v),
            Err(e) => {
                self.fail(format!("{}: {}", label, e));
                None
            }
        }
    }

    fn family(&mut self, spec: FamilySpec) -> Option<(String, LoopyMultigraph)> {
        let label = format!("{}{:?}", spec.token(), spec.params());
        match generate(&spec) {
            Ok(g) => Some((label, g)),
            Err(e) => {
                self.fail(format!("{}: {}", label, e));
                None
            }
        }
    }

    fn expect_value(&mut self, spec: FamilySpec, expected: i32) {
        if let Some((label, g)) = self.family(spec) {
            if let Some(v) = self.value(&label, &g) {
                if v != expected {
                    self.fail(format!("{}: differential {:+}, expected {:+}", label, v, expected));
                }
            }
        }
    }

    fn expect_winner_of(&mut self, label: &str, g: &LoopyMultigraph, expected_sign: i32) {
        if let Some(v) = self.value(label, g) {
            if sign(v) != expected_sign {
                self.fail(format!(
                    "{}: {} wins ({:+}), expected {}",
                    label,
                    winner_word(v),
                    v,
                    winner_word(expected_sign)
                ));
            }
        }
    }

    fn expect_winner(&mut self, spec: FamilySpec, expected_sign: i32) {
        if let Some((label, g)) = self.family(spec) {
            self.expect_winner_of(&label, &g, expected_sign);
        }
    }

    fn finish(self, id: &'static str) -> ClaimReport {
        let passed = self.failure.is_none();
        let witness = self
            .failure
            .unwrap_or_else(|| format!("{} instance(s) checked", self.instances));
        ClaimReport {
            id,
            passed,
            instances: self.instances,
            witness,
            notes: self.notes,
        }
    }
}

fn friendship_alternation(r: &mut Run) {
    for n in 1..=8 {
        r.expect_value(FamilySpec::Friendship(n), if n % 2 == 0 { 1 } else { -3 });
    }
}

fn pinwheel_second_player(r: &mut Run) {
    for n in 1..=8 {
        r.expect_winner(FamilySpec::Pinwheel(n), -1);
    }
}

fn loopy_star_parity(r: &mut Run) {
    // LoopyStar(x) has x + 1 vertices
    for x in 1..=12 {
        r.expect_value(FamilySpec::LoopyStar(x), if (x + 1) % 2 == 0 { 2 } else { -3 });
    }
}

fn double_loopy_star(r: &mut Run) {
    for n in 1..=12 {
        let expected = match n {
            1 => 0,
            2 => -1,
            _ if n % 2 == 1 => -2,
            _ => -3,
        };
        r.expect_value(FamilySpec::GeneralizedLoopyStar(n, 2), expected);
    }
}

fn starlike(r: &mut Run, loops: u32, range: core::ops::RangeInclusive<u32>, winner: fn(u32) -> i32) {
    for n in range {
        r.expect_winner(FamilySpec::LoopyStarlike(n, loops, 5), winner(n));
    }
}

fn starlike_three_loops(r: &mut Run) {
    starlike(r, 3, 2..=3, |_| -1);
    if let Some((label, g)) = r.family(FamilySpec::LoopyStarlike(1, 3, 5)) {
        if let Some(v) = r.value(&label, &g) {
            r.notes.push(format!("{}: {} {:+}", label, winner_word(v), v));
        }
    }
}

fn bipartite_star(r: &mut Run) {
    for b in 1..=8 {
        for spec in [FamilySpec::CompleteBipartite(1, b), FamilySpec::CompleteBipartite(b, 1)] {
            if let Some((label, g)) = r.family(spec) {
                let star = LoopyMultigraph::from_edges((1..=b).map(|i| (0, i)));
                if canonical_key(&g) != canonical_key(&star) {
                    r.fail(format!("{}: not isomorphic to the star on {} vertices", label, b + 1));
                }
                if let Some(v) = r.value(&label, &g) {
                    if v != (b + 1) as i32 {
                        r.fail(format!("{}: differential {:+}, expected {:+}", label, v, b + 1));
                    }
                }
            }
        }
    }
}

fn bipartite_two(r: &mut Run) {
    for b in 1..=8 {
        let expected = if b % 2 == 1 { 1 } else { -1 };
        r.expect_winner(FamilySpec::CompleteBipartite(2, b), expected);
        r.expect_winner(FamilySpec::CompleteBipartite(b, 2), expected);
    }
}

/// One representative of every unlabeled tree on `2..=max` vertices, grown
/// leaf by leaf and deduplicated by canonical key.
pub fn unlabeled_trees(max: u32) -> Vec<LoopyMultigraph> {
    let mut out = Vec::new();
    let mut layer = alloc::vec![LoopyMultigraph::from_edges([(0, 1)])];
    for n in 2..=max {
        out.extend(layer.iter().cloned());
        if n == max {
            break;
        }
        let mut seen = alloc::collections::BTreeSet::new();
        let mut next = Vec::new();
        for t in &layer {
            for v in 0..n {
                let grown = t.clone().with_edge(v, n);
                if seen.insert(canonical_key(&grown)) {
                    next.push(grown);
                }
            }
        }
        layer = next;
    }
    out
}

fn tree_first_player(r: &mut Run) {
    for t in unlabeled_trees(9) {
        let n = t.vertex_count() as i32;
        let label = format!("tree {:?}", edge_list(&t));
        if let Some(v) = r.value(&label, &t) {
            if v != n {
                r.fail(format!("{}: differential {:+}, expected {:+}", label, v, n));
            }
        }
    }
}

fn forest_first_player(r: &mut Run) {
    let trees = unlabeled_trees(4);
    for (i, a) in trees.iter().enumerate() {
        for b in &trees[i..] {
            let f = a.disjoint_union(b);
            let n = f.vertex_count() as i32;
            let label = format!("forest {:?}", edge_list(&f));
            if let Some(v) = r.value(&label, &f) {
                if v != n {
                    r.fail(format!("{}: differential {:+}, expected {:+}", label, v, n));
                }
            }
        }
    }
}

fn cycle_second_player(r: &mut Run) {
    for n in 3..=12 {
        r.expect_value(FamilySpec::Cycle(n), -(n as i32));
    }
}

fn cycle_union_ge8(r: &mut Run) {
    for (a, b) in [(8, 8), (8, 9)] {
        let g = generate(&FamilySpec::Cycle(a))
            .unwrap()
            .disjoint_union(&generate(&FamilySpec::Cycle(b)).unwrap());
        r.expect_winner_of(&format!("C{}+C{}", a, b), &g, -1);
    }
}

fn c5_loop_counterexample(r: &mut Run) {
    r.expect_winner(FamilySpec::LoopyCycle(5, 1), 1);
    let two = generate(&FamilySpec::LoopyCycle(5, 2)).unwrap();
    r.expect_winner_of("C5 with loops on adjacent vertices 0 and 1", &two, 1);
    r.instances += 1;
    match r.solver.move_values(&two) {
        Ok(moves) => {
            let best = moves.iter().map(|m| m.1).max().unwrap_or(i32::MIN);
            let between = moves.iter().find(|m| m.0 == EdgeRef::new(0, 1)).map(|m| m.1);
            if between != Some(best) {
                r.fail(format!(
                    "C5 with two loops: edge 0-1 scores {:?}, best move scores {:+}",
                    between, best
                ));
            }
        }
        Err(e) => r.fail(format!("C5 with two loops: {}", e)),
    }
}

fn loop_addition(r: &mut Run) {
    let mut bases: Vec<FamilySpec> = Vec::new();
    bases.extend((3..=8).map(FamilySpec::Cycle));
    bases.extend([1, 3, 5].map(FamilySpec::Friendship));
    bases.extend((1..=4).map(FamilySpec::Pinwheel));
    bases.extend([2, 4, 6].map(FamilySpec::LoopyStar));
    bases.extend((2..=5).map(|n| FamilySpec::GeneralizedLoopyStar(n, 2)));
    bases.extend([FamilySpec::Complete(4), FamilySpec::CompleteBipartite(2, 2), FamilySpec::CompleteBipartite(2, 4)]);
    let mut used = 0;
    for spec in bases {
        let Some((label, g)) = r.family(spec) else { continue };
        let Some(v) = r.value(&label, &g) else { continue };
        if v >= 0 {
            continue;
        }
        used += 1;
        let vertices: Vec<Vertex> = g.vertices().collect();
        for x in vertices {
            let looped = g.clone().with_edge(x, x);
            r.expect_winner_of(&format!("{} plus a loop at {}", label, x), &looped, 1);
        }
    }
    if used == 0 {
        r.fail("no second-player win among the bases".into());
    }
}

fn balloon_even_tie(r: &mut Run) {
    for n in [4, 6, 8, 10] {
        let Some((label, h)) = r.family(FamilySpec::BalloonPath(n)) else { continue };
        r.expect_winner_of(&label, &h, 0);
        mirror_check(r, &label, &h, Some("balloon_even_tie"));
    }
}

fn doubled_tie(r: &mut Run) {
    let bases = [
        FamilySpec::Cycle(3),
        FamilySpec::Cycle(4),
        FamilySpec::Cycle(5),
        FamilySpec::Complete(4),
    ];
    for spec in bases {
        let Some((label, base)) = r.family(spec) else { continue };
        let last = base.label_bound() as Vertex - 1;
        // connect at corresponding vertices, then at different ones
        for (a, b) in [(0, 0), (0, last)] {
            let h = doubled(&base, a, b);
            mirror_check(r, &format!("two {} joined {}-{}'", label, a, b), &h, None);
        }
    }
}

fn mirror_check(r: &mut Run, label: &str, h: &LoopyMultigraph, claim: Option<&'static str>) {
    r.instances += 1;
    let pairing = match MirrorPairing::detect(h) {
        Ok(p) => p,
        Err(e) => return r.fail(format!("{}: {}", label, e)),
    };
    if claim.is_none() {
        if let Err(e) = pairing.require_base_min_incident(h) {
            return r.fail(format!("{}: {}", label, e));
        }
    }
    let mut pol = mirror_policy(h, &pairing);
    if let Some(id) = claim {
        pol = pol.for_claim(id);
    }
    match best_response_value(h, &pol, Player::P1) {
        Ok(v) if v >= 0 => {}
        Ok(v) => r.fail(format!("{}: mirror policy concedes {:+}", label, v)),
        Err(e) => r.fail(format!("{}: {}", label, e)),
    }
}

fn loopy_cycle_report(r: &mut Run) {
    for n in 4..=10 {
        let mut line = format!("C({},k):", n);
        for k in 1..=3 {
            let Some((label, g)) = r.family(FamilySpec::LoopyCycle(n, k)) else { continue };
            if let Some(v) = r.value(&label, &g) {
                line.push_str(&format!(" k={} {} {:+}", k, winner_word(v), v));
            }
        }
        r.notes.push(line);
    }
}

fn quadrant_mirror_report(r: &mut Run) {
    for n in 1..=2 {
        r.instances += 1;
        let Some((label, g)) = r.family(FamilySpec::Complete(4 * n)) else { continue };
        let pol = match quadrant_mirror_policy(n) {
            Ok(p) => p,
            Err(e) => return r.fail(format!("{}: {}", label, e)),
        };
        match evaluate_policy(&g, &pol, Player::P2, &mut r.solver) {
            Ok(rep) => {
                r.notes.push(format!(
                    "{}: quadrant mirror for P2 yields {:+} against best response; optimum {:+}",
                    label, rep.best_response, rep.optimal
                ));
                if !rep.consistent() {
                    r.fail(format!("{}: policy value {:+} beats optimum {:+}", label, rep.best_response, rep.optimal));
                }
            }
            Err(e) => r.fail(format!("{}: {}", label, e)),
        }
    }
}

fn edge_list(g: &LoopyMultigraph) -> Vec<(Vertex, Vertex)> {
    g.edge_instances().map(EdgeRef::endpoints).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_counts() {
        let trees = unlabeled_trees(9);
        let mut by_size = [0usize; 10];
        for t in &trees {
            by_size[t.vertex_count()] += 1;
        }
        assert_eq!(&by_size[2..], &[1, 1, 2, 3, 6, 11, 23, 47]);
    }

    #[test]
    fn unknown_claim_lists_tokens() {
        let e = verify_claim("nope").unwrap_err();
        let text = alloc::string::ToString::to_string(&e);
        assert!(text.contains("friendship_alternation"));
        assert!(text.contains("cycle_union_ge8"));
    }

    #[test]
    fn quick_claims_pass() {
        for id in ["friendship_alternation", "c5_loop_counterexample", "bipartite_star", "starlike_one_loop"] {
            let rep = verify_claim(id).unwrap();
            assert!(rep.passed, "{}: {}", id, rep.witness);
        }
    }
}
