//! Deterministic move policies and exhaustive best-response evaluation.
//!
//! A policy controls one player; [`best_response_value`] lets the other
//! player search every line against it. The result is the exact outcome the
//! policy guarantees, which makes "player X can force Y" claims checkable.

use alloc::collections::BTreeMap;
use alloc::rc::Rc;
use alloc::string::String;
use alloc::vec::Vec;
use core::cell::RefCell;
use core::fmt;

use hashbrown::HashMap;

use crate::canonical;
use crate::graph::{EdgeRef, LoopyMultigraph, MoveOutcome, Vertex};
use crate::solver::{SolveError, SolveOptions, Solver};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    P1,
    P2,
}

impl Player {
    pub fn other(self) -> Self {
        match self {
            Player::P1 => Player::P2,
            Player::P2 => Player::P1,
        }
    }

    /// +1 for P1, -1 for P2.
    pub fn sign(self) -> i32 {
        match self {
            Player::P1 => 1,
            Player::P2 => -1,
        }
    }
}

/// Who made an observed move, from the policy's point of view.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Actor {
    Own,
    Opponent,
}

#[derive(Clone, Debug, PartialEq)]
pub enum StrategyError {
    /// The policy answered with an edge that is not on the board.
    PolicyFault {
        policy: &'static str,
        edge: EdgeRef,
        position: LoopyMultigraph,
    },
    /// The board is not two copies of one graph joined by a single edge.
    NotDoubled(&'static str),
    /// A base vertex has fewer than two incident edges.
    BaseDegree { vertex: Vertex, incident: u32 },
    /// The board is not the labeled complete graph on 4n vertices.
    NotQuadrantBoard,
    Solve(SolveError),
}

impl From<SolveError> for StrategyError {
    fn from(e: SolveError) -> Self {
        StrategyError::Solve(e)
    }
}

impl fmt::Display for StrategyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrategyError::PolicyFault {
                policy,
                edge,
                position,
            } => {
                write!(f, "policy '{}' chose absent edge {{{}}} on position [", policy, edge)?;
                for (i, e) in position.edge_instances().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{}-{}", e.endpoints().0, e.endpoints().1)?;
                }
                f.write_str("]")
            }
            StrategyError::NotDoubled(why) => write!(f, "not a doubled graph: {}", why),
            StrategyError::BaseDegree { vertex, incident } => write!(
                f,
                "base vertex {} has {} incident edge(s); at least 2 required",
                vertex, incident
            ),
            StrategyError::NotQuadrantBoard => f.write_str("board is not the complete graph on 4n vertices"),
            StrategyError::Solve(e) => write!(f, "{}", e),
        }
    }
}

/// A deterministic move rule for one player.
///
/// Policies see every move played (their own and the opponent's) through
/// [`observe`](Policy::observe) and may keep bookkeeping from it.
pub trait Policy: Clone {
    fn name(&self) -> &'static str;

    /// The controlled player's next move on `g`.
    fn choose(&mut self, g: &LoopyMultigraph) -> Result<EdgeRef, StrategyError>;

    fn observe(&mut self, actor: Actor, edge: EdgeRef, outcome: &MoveOutcome);

    /// Bytes identifying the bookkeeping state, if the policy's future
    /// choices depend only on that state and the position.
    fn state_key(&self) -> Option<Vec<u8>> {
        None
    }

    /// Registered claim this policy is the constructive witness for.
    fn claim(&self) -> Option<&'static str> {
        None
    }
}

/// Exact P1-minus-P2 differential when `controlled` follows `pol` and the
/// other player answers with exhaustive optimal play.
pub fn best_response_value<P: Policy>(
    g: &LoopyMultigraph,
    pol: &P,
    controlled: Player,
) -> Result<i32, StrategyError> {
    let mut memo = HashMap::new();
    respond(g, pol, Player::P1, controlled, &mut memo)
}

type ResponseKey = (Vec<u8>, Player, Vec<u8>);

fn position_bytes(g: &LoopyMultigraph) -> Vec<u8> {
    let mut out = Vec::with_capacity(g.edge_classes().len() * 12);
    for c in g.edge_classes() {
        let (u, v) = c.edge.endpoints();
        out.extend_from_slice(&u.to_le_bytes());
        out.extend_from_slice(&v.to_le_bytes());
        out.extend_from_slice(&c.multiplicity.to_le_bytes());
    }
    out
}

fn respond<P: Policy>(
    g: &LoopyMultigraph,
    pol: &P,
    to_move: Player,
    controlled: Player,
    memo: &mut HashMap<ResponseKey, i32>,
) -> Result<i32, StrategyError> {
    if g.is_empty() {
        return Ok(0);
    }
    let key = pol.state_key().map(|s| (position_bytes(g), to_move, s));
    if let Some(k) = &key {
        if let Some(&v) = memo.get(k) {
            return Ok(v);
        }
    }

    let step = |e: EdgeRef, actor: Actor, memo: &mut HashMap<ResponseKey, i32>| {
        let out = g.remove_edge(e).map_err(|_| StrategyError::PolicyFault {
            policy: pol.name(),
            edge: e,
            position: g.clone(),
        })?;
        let mut next = pol.clone();
        next.observe(actor, e, &out);
        let after = if out.mover_moves_again { to_move } else { to_move.other() };
        let rest = respond(&out.successor, &next, after, controlled, memo)?;
        Ok::<i32, StrategyError>(to_move.sign() * out.captured as i32 + rest)
    };

    let value = if to_move == controlled {
        let mut p = pol.clone();
        let e = p.choose(g)?;
        if g.multiplicity(e.endpoints().0, e.endpoints().1) == 0 {
            return Err(StrategyError::PolicyFault {
                policy: pol.name(),
                edge: e,
                position: g.clone(),
            });
        }
        let out = g.remove_edge(e).expect("checked present");
        p.observe(Actor::Own, e, &out);
        let after = if out.mover_moves_again { to_move } else { to_move.other() };
        to_move.sign() * out.captured as i32 + respond(&out.successor, &p, after, controlled, memo)?
    } else {
        let mut best: Option<i32> = None;
        for e in g.distinct_moves(false) {
            let v = step(e, Actor::Opponent, memo)?;
            // the responder maximizes its own share
            let better = match best {
                None => true,
                Some(b) => to_move.sign() * v > to_move.sign() * b,
            };
            if better {
                best = Some(v);
            }
        }
        best.expect("non-empty position has a move")
    };

    if let Some(k) = key {
        memo.insert(k, value);
    }
    Ok(value)
}

/// Plays the solver's best move. Shares one memo across clones.
#[derive(Clone)]
pub struct OptimalPolicy {
    solver: Rc<RefCell<Solver>>,
}

impl OptimalPolicy {
    pub fn new() -> Self {
        OptimalPolicy {
            solver: Rc::new(RefCell::new(Solver::new(SolveOptions::default()))),
        }
    }
}

impl Default for OptimalPolicy {
    fn default() -> Self {
        Self::new()
    }
}

impl Policy for OptimalPolicy {
    fn name(&self) -> &'static str {
        "optimal"
    }

    fn choose(&mut self, g: &LoopyMultigraph) -> Result<EdgeRef, StrategyError> {
        Ok(self.solver.borrow_mut().best_move(g)?.0)
    }

    fn observe(&mut self, _: Actor, _: EdgeRef, _: &MoveOutcome) {}

    fn state_key(&self) -> Option<Vec<u8>> {
        Some(Vec::new())
    }
}

/// Two copies of a base graph joined by one connecting edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MirrorPairing {
    pub connector: EdgeRef,
    /// Copy-A vertex to its copy-B twin, ascending by copy-A vertex.
    pub twins: Vec<(Vertex, Vertex)>,
}

impl MirrorPairing {
    /// Validates that `twins` carries copy A (its domain) onto copy B and
    /// that `connector` is the only edge between the copies.
    pub fn new(h: &LoopyMultigraph, connector: EdgeRef, twins: &[(Vertex, Vertex)]) -> Result<Self, StrategyError> {
        let (cu, cv) = connector.endpoints();
        if connector.is_loop() || h.multiplicity(cu, cv) != 1 {
            return Err(StrategyError::NotDoubled("connector must be a single non-loop edge"));
        }
        let mut twins = twins.to_vec();
        twins.sort_unstable();
        let bound = h.label_bound();
        let mut side = alloc::vec![0u8; bound];
        let mut image = alloc::vec![Vertex::MAX; bound];
        for &(a, b) in &twins {
            if (a as usize) >= bound || (b as usize) >= bound || side[a as usize] != 0 || side[b as usize] != 0 {
                return Err(StrategyError::NotDoubled("twin map is not a bijection between disjoint copies"));
            }
            side[a as usize] = 1;
            side[b as usize] = 2;
            image[a as usize] = b;
        }
        if h.vertices().any(|x| side[x as usize] == 0) {
            return Err(StrategyError::NotDoubled("twin map misses a vertex"));
        }
        if side[cu as usize] == side[cv as usize] {
            return Err(StrategyError::NotDoubled("connector stays inside one copy"));
        }
        let rest = h.remove_edge(connector).expect("connector present").successor;
        let mut a_classes = 0;
        let mut b_classes = 0;
        for c in rest.edge_classes() {
            let (u, v) = c.edge.endpoints();
            match (side[u as usize], side[v as usize]) {
                (1, 1) => {
                    a_classes += 1;
                    let (x, y) = (image[u as usize], image[v as usize]);
                    if rest.multiplicity(x, y) != c.multiplicity {
                        return Err(StrategyError::NotDoubled("copies differ under the twin map"));
                    }
                }
                (2, 2) => b_classes += 1,
                _ => return Err(StrategyError::NotDoubled("more than one edge joins the copies")),
            }
        }
        if a_classes != b_classes {
            return Err(StrategyError::NotDoubled("copies differ under the twin map"));
        }
        Ok(MirrorPairing { connector, twins })
    }

    /// Finds the connecting edge and twin map: the first single bridge whose
    /// removal leaves two isomorphic halves.
    pub fn detect(h: &LoopyMultigraph) -> Result<Self, StrategyError> {
        for c in h.edge_classes() {
            if c.multiplicity != 1 || c.edge.is_loop() {
                continue;
            }
            let out = h.remove_edge(c.edge).expect("own edge");
            if out.captured != 0 {
                continue;
            }
            let comps = out.successor.components();
            if comps.len() != 2 || comps[0].len() != comps[1].len() {
                continue;
            }
            let (u, _) = c.edge.endpoints();
            let (a, b) = if comps[0].contains(&u) { (&comps[0], &comps[1]) } else { (&comps[1], &comps[0]) };
            let fa = canonical::canonical_form(&out.successor.induced(a));
            let fb = canonical::canonical_form(&out.successor.induced(b));
            if fa.key != fb.key {
                continue;
            }
            let twins: Vec<_> = fa.labeling.iter().copied().zip(fb.labeling.iter().copied()).collect();
            return MirrorPairing::new(h, c.edge, &twins);
        }
        Err(StrategyError::NotDoubled("no edge splits the graph into two isomorphic halves"))
    }

    /// Copy A as it stands without the connector.
    pub fn base(&self, h: &LoopyMultigraph) -> LoopyMultigraph {
        let rest = h.remove_edge(self.connector).expect("connector present").successor;
        let side_a: Vec<Vertex> = self.twins.iter().map(|t| t.0).collect();
        rest.induced(&side_a)
    }

    /// Errors unless every base vertex has at least two incident edges.
    pub fn require_base_min_incident(&self, h: &LoopyMultigraph) -> Result<(), StrategyError> {
        let base = self.base(h);
        for &(a, _) in &self.twins {
            let incident = base.incident_count(a);
            if incident < 2 {
                return Err(StrategyError::BaseDegree { vertex: a, incident });
            }
        }
        Ok(())
    }

    fn edge_mirror(&self, h: &LoopyMultigraph) -> BTreeMap<EdgeRef, EdgeRef> {
        let mut image = alloc::vec![Vertex::MAX; h.label_bound()];
        for &(a, b) in &self.twins {
            image[a as usize] = b;
            image[b as usize] = a;
        }
        let mut map = BTreeMap::new();
        for c in h.edge_classes() {
            if c.edge == self.connector {
                continue;
            }
            let (u, v) = c.edge.endpoints();
            map.insert(c.edge, EdgeRef::new(image[u as usize], image[v as usize]));
        }
        map
    }
}

/// Copycat play over an edge involution.
///
/// On its turn the policy (1) plays its opening move once, (2) hands a
/// forest to the optimal endgame if configured, (3) takes any capture
/// available, (4) otherwise restores the oldest unbalanced mirror pair by
/// removing from the side with more instances left, and (5) falls back to
/// the least edge.
#[derive(Clone)]
pub struct MirrorPolicy {
    name: &'static str,
    claim: Option<&'static str>,
    mirror: Rc<BTreeMap<EdgeRef, EdgeRef>>,
    opening: Option<EdgeRef>,
    endgame: Option<OptimalPolicy>,
    opened: bool,
    // pair ids (least edge of the pair) in the order they became unbalanced
    pending: Vec<EdgeRef>,
}

impl MirrorPolicy {
    pub fn new(name: &'static str, mirror: BTreeMap<EdgeRef, EdgeRef>, opening: Option<EdgeRef>) -> Self {
        MirrorPolicy {
            name,
            claim: None,
            mirror: Rc::new(mirror),
            opening,
            endgame: None,
            opened: opening.is_none(),
            pending: Vec::new(),
        }
    }

    /// Plays optimally once the position is a forest.
    pub fn with_forest_endgame(mut self) -> Self {
        self.endgame = Some(OptimalPolicy::new());
        self
    }

    pub fn for_claim(mut self, id: &'static str) -> Self {
        self.claim = Some(id);
        self
    }

    pub fn mirror_of(&self, e: EdgeRef) -> Option<EdgeRef> {
        self.mirror.get(&e).copied()
    }

    fn pair_id(&self, e: EdgeRef) -> Option<EdgeRef> {
        self.mirror.get(&e).map(|&m| m.min(e))
    }
}

impl Policy for MirrorPolicy {
    fn name(&self) -> &'static str {
        self.name
    }

    fn choose(&mut self, g: &LoopyMultigraph) -> Result<EdgeRef, StrategyError> {
        if !self.opened {
            if let Some(o) = self.opening {
                let (u, v) = o.endpoints();
                if g.multiplicity(u, v) > 0 {
                    return Ok(o);
                }
            }
        }
        if let Some(end) = &mut self.endgame {
            if g.is_forest() {
                return end.choose(g);
            }
        }
        let moves = g.distinct_moves(false);
        if let Some(&e) = moves.iter().find(|&&e| g.capture_count(e) > 0) {
            return Ok(e);
        }
        for &id in &self.pending {
            let m = self.mirror[&id];
            let (a, b) = (id.endpoints(), m.endpoints());
            let (ma, mb) = (g.multiplicity(a.0, a.1), g.multiplicity(b.0, b.1));
            if ma > mb {
                return Ok(id);
            }
            if mb > ma {
                return Ok(m);
            }
        }
        moves.first().copied().ok_or(StrategyError::Solve(SolveError::EmptyPosition))
    }

    fn observe(&mut self, actor: Actor, edge: EdgeRef, outcome: &MoveOutcome) {
        if actor == Actor::Own && Some(edge) == self.opening {
            self.opened = true;
        }
        if let Some(id) = self.pair_id(edge) {
            if !self.pending.contains(&id) {
                self.pending.push(id);
            }
        }
        let g = &outcome.successor;
        let mirror = Rc::clone(&self.mirror);
        self.pending.retain(|id| {
            let m = mirror[id];
            let (a, b) = (id.endpoints(), m.endpoints());
            g.multiplicity(a.0, a.1) != g.multiplicity(b.0, b.1)
        });
    }

    fn state_key(&self) -> Option<Vec<u8>> {
        let mut out = Vec::with_capacity(1 + 8 * self.pending.len());
        out.push(self.opened as u8);
        for id in &self.pending {
            let (u, v) = id.endpoints();
            out.extend_from_slice(&u.to_le_bytes());
            out.extend_from_slice(&v.to_le_bytes());
        }
        Some(out)
    }

    fn claim(&self) -> Option<&'static str> {
        self.claim
    }
}

/// Player 1's copycat policy on a doubled graph: open with the connector,
/// then mirror across the twin map.
pub fn mirror_policy(h: &LoopyMultigraph, pairing: &MirrorPairing) -> MirrorPolicy {
    MirrorPolicy::new("mirror", pairing.edge_mirror(h), Some(pairing.connector)).for_claim("doubled_tie")
}

/// Player 2's quadrant copycat on the complete graph with `4n` vertices.
///
/// Vertices `0..n`, `n..2n`, `2n..3n`, `3n..4n` form quadrants A, B, C, D laid
/// out as `A B / C D`; the i-th vertex of each quadrant is associated with the
/// i-th of the others. An edge inside one quadrant maps to the diagonal
/// quadrant (A-D, B-C). An edge across a row (A-B, C-D) maps to the other
/// row; an edge across a column or diagonal maps to the other column. Once
/// the position is a forest the policy plays optimally.
pub fn quadrant_mirror_policy(n: u32) -> Result<MirrorPolicy, StrategyError> {
    if n == 0 {
        return Err(StrategyError::NotQuadrantBoard);
    }
    let place = |x: Vertex| (x / n / 2, (x / n) % 2, x % n);
    let at = |r: u32, c: u32, i: u32| (2 * r + c) * n + i;
    let mut map = BTreeMap::new();
    for x in 0..4 * n {
        for y in x + 1..4 * n {
            let ((rx, cx, ix), (ry, cy, iy)) = (place(x), place(y));
            let (a, b) = if (rx, cx) == (ry, cy) {
                (at(1 - rx, 1 - cx, ix), at(1 - ry, 1 - cy, iy))
            } else if rx == ry {
                (at(1 - rx, cx, ix), at(1 - ry, cy, iy))
            } else {
                (at(rx, 1 - cx, ix), at(ry, 1 - cy, iy))
            };
            map.insert(EdgeRef::new(x, y), EdgeRef::new(a, b));
        }
    }
    Ok(MirrorPolicy::new("quadrant_mirror", map, None)
        .with_forest_endgame()
        .for_claim("quadrant_mirror_report"))
}

/// [`quadrant_mirror_policy`] for a given board, which must be the labeled
/// complete graph on `4n` vertices `0..4n`.
pub fn quadrant_mirror_policy_for(g: &LoopyMultigraph) -> Result<MirrorPolicy, StrategyError> {
    let v = g.vertex_count() as u32;
    if v == 0 || v % 4 != 0 || g.label_bound() as u32 != v {
        return Err(StrategyError::NotQuadrantBoard);
    }
    let complete = crate::families::generate(&crate::families::FamilySpec::Complete(v))
        .map_err(|_| StrategyError::NotQuadrantBoard)?;
    if *g != complete {
        return Err(StrategyError::NotQuadrantBoard);
    }
    quadrant_mirror_policy(v / 4)
}

/// Result of one policy evaluation, for reports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolicyReport {
    pub policy: &'static str,
    pub controlled: Player,
    /// P1-minus-P2 differential under best response.
    pub best_response: i32,
    /// Optimal P1-minus-P2 differential.
    pub optimal: i32,
}

impl PolicyReport {
    /// A policy can never beat optimal play.
    pub fn consistent(&self) -> bool {
        match self.controlled {
            Player::P1 => self.best_response <= self.optimal,
            Player::P2 => self.best_response >= self.optimal,
        }
    }
}

pub fn evaluate_policy<P: Policy>(
    g: &LoopyMultigraph,
    pol: &P,
    controlled: Player,
    solver: &mut Solver,
) -> Result<PolicyReport, StrategyError> {
    let best_response = best_response_value(g, pol, controlled)?;
    let optimal = solver.solve(g)?.differential;
    Ok(PolicyReport {
        policy: pol.name(),
        controlled,
        best_response,
        optimal,
    })
}

/// Formats a short description of a policy report.
pub fn describe(report: &PolicyReport) -> String {
    alloc::format!(
        "{} as {:?}: best response {:+}, optimal {:+}",
        report.policy,
        report.controlled,
        report.best_response,
        report.optimal
    )
}
