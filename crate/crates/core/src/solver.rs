//! Exact game values by negamax over the score differential.
//!
//! Values are mover-relative: the differential of a position is what the
//! player about to move collects minus what the opponent collects under
//! optimal play. A capturing move keeps the turn, so its child value is
//! added rather than negated. Positions are memoized by canonical key.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::cell::{Cell, RefCell};
use core::fmt;

use hashbrown::HashMap;

use crate::canonical::{self, CanonicalForm, CanonicalKey};
use crate::families::{FamilyError, FamilySpec};
use crate::graph::{EdgeRef, LoopyMultigraph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Winner {
    P1,
    P2,
    Tie,
}

impl Winner {
    pub fn from_differential(v: i32) -> Self {
        match v {
            v if v > 0 => Winner::P1,
            v if v < 0 => Winner::P2,
            _ => Winner::Tie,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            Winner::P1 => "P1",
            Winner::P2 => "P2",
            Winner::Tie => "Tie",
        }
    }
}

impl fmt::Display for Winner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Positions searched below a memo probe.
    pub nodes: u64,
    pub memo_hits: u64,
    pub elapsed_ms: u64,
}

/// Exact value of a root position.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GameValue {
    pub differential: i32,
    pub p1_score: u32,
    pub p2_score: u32,
    pub winner: Winner,
    pub stats: SearchStats,
}

impl GameValue {
    pub fn at_root(vertex_count: usize, differential: i32, stats: SearchStats) -> Result<Self, SolveError> {
        let (p1_score, p2_score) = scores_from_value(vertex_count, differential)?;
        Ok(GameValue {
            differential,
            p1_score,
            p2_score,
            winner: Winner::from_differential(differential),
            stats,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AbortReason {
    NodeLimit,
    TimeBudget,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveError {
    /// A resource limit was hit; no value was produced.
    Aborted(AbortReason),
    /// `best_move` on a position without edges.
    EmptyPosition,
    /// A differential incompatible with the vertex count.
    Inconsistent { vertices: usize, differential: i32 },
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::Aborted(AbortReason::NodeLimit) => f.write_str("aborted: node limit reached"),
            SolveError::Aborted(AbortReason::TimeBudget) => f.write_str("aborted: time budget exhausted"),
            SolveError::EmptyPosition => f.write_str("position has no edges"),
            SolveError::Inconsistent {
                vertices,
                differential,
            } => write!(
                f,
                "internal consistency: differential {} impossible with {} vertices",
                differential, vertices
            ),
        }
    }
}

/// Converts a root differential into (P1, P2) scores.
pub fn scores_from_value(vertices: usize, differential: i32) -> Result<(u32, u32), SolveError> {
    let n = vertices as i64;
    let v = differential as i64;
    if v.abs() > n || (n + v) % 2 != 0 {
        return Err(SolveError::Inconsistent {
            vertices,
            differential,
        });
    }
    Ok((((n + v) / 2) as u32, ((n - v) / 2) as u32))
}

/// Search switches. None of them changes a returned value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    pub pruning: bool,
    pub memo: bool,
    pub orbit_dedup: bool,
    /// Evict least-recently-used entries beyond this many.
    pub memo_capacity: Option<usize>,
    pub node_limit: Option<u64>,
    /// Needs a [`Clock`] on the solver; ignored without one.
    pub time_budget_ms: Option<u64>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            pruning: true,
            memo: true,
            orbit_dedup: false,
            memo_capacity: None,
            node_limit: None,
            time_budget_ms: None,
        }
    }
}

/// Millisecond time source supplied by the host.
pub trait Clock {
    fn now_ms(&self) -> u64;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bound {
    Exact,
    /// True value is at least the stored one.
    Lower,
    /// True value is at most the stored one.
    Upper,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Entry {
    pub value: i16,
    pub bound: Bound,
}

/// Memo from canonical keys to mover-relative values or bounds.
///
/// Values stored under one key always describe the same position, so
/// concurrent writers may race freely.
pub trait TranspositionTable {
    fn probe(&self, key: &CanonicalKey) -> Option<Entry>;
    fn store(&self, key: CanonicalKey, entry: Entry);
    fn len(&self) -> usize;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl<T: TranspositionTable + ?Sized> TranspositionTable for &T {
    fn probe(&self, key: &CanonicalKey) -> Option<Entry> {
        (**self).probe(key)
    }
    fn store(&self, key: CanonicalKey, entry: Entry) {
        (**self).store(key, entry)
    }
    fn len(&self) -> usize {
        (**self).len()
    }
}

struct Slot {
    entry: Entry,
    last_used: u64,
}

/// Single-threaded table with optional LRU capacity.
#[derive(Default)]
pub struct MemoTable {
    map: RefCell<HashMap<CanonicalKey, Slot>>,
    tick: Cell<u64>,
    capacity: Option<usize>,
}

impl MemoTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity_limit(capacity: Option<usize>) -> Self {
        MemoTable {
            capacity,
            ..Self::default()
        }
    }

    fn next_tick(&self) -> u64 {
        let t = self.tick.get() + 1;
        self.tick.set(t);
        t
    }

    pub fn insert_exact(&self, key: CanonicalKey, value: i16) {
        self.store(
            key,
            Entry {
                value,
                bound: Bound::Exact,
            },
        );
    }

    /// Exact entries, sorted by key.
    pub fn exact_entries(&self) -> Vec<(CanonicalKey, i16)> {
        let mut out: Vec<_> = self
            .map
            .borrow()
            .iter()
            .filter(|(_, s)| s.entry.bound == Bound::Exact)
            .map(|(k, s)| (k.clone(), s.entry.value))
            .collect();
        out.sort();
        out
    }

    pub fn entries(&self) -> Vec<(CanonicalKey, Entry)> {
        self.map.borrow().iter().map(|(k, s)| (k.clone(), s.entry)).collect()
    }

    fn evict(&self, map: &mut HashMap<CanonicalKey, Slot>, capacity: usize) {
        let keep = (capacity - capacity / 4).max(1);
        let mut ticks: Vec<u64> = map.values().map(|s| s.last_used).collect();
        let cut = ticks.len() - keep;
        let (_, &mut cutoff, _) = ticks.select_nth_unstable(cut);
        map.retain(|_, s| s.last_used >= cutoff);
    }
}

impl TranspositionTable for MemoTable {
    fn probe(&self, key: &CanonicalKey) -> Option<Entry> {
        let tick = self.next_tick();
        let mut map = self.map.borrow_mut();
        let slot = map.get_mut(key)?;
        slot.last_used = tick;
        Some(slot.entry)
    }

    fn store(&self, key: CanonicalKey, entry: Entry) {
        let tick = self.next_tick();
        let mut map = self.map.borrow_mut();
        match map.get_mut(&key) {
            Some(slot) => {
                if slot.entry.bound != Bound::Exact || entry.bound == Bound::Exact {
                    slot.entry = entry;
                }
                slot.last_used = tick;
            }
            None => {
                map.insert(
                    key,
                    Slot {
                        entry,
                        last_used: tick,
                    },
                );
                if let Some(cap) = self.capacity {
                    if map.len() > cap {
                        self.evict(&mut map, cap);
                    }
                }
            }
        }
    }

    fn len(&self) -> usize {
        self.map.borrow().len()
    }
}

const INF: i32 = i32::MAX / 4;

/// Reusable search context; the memo persists across calls.
pub struct Solver<T: TranspositionTable = MemoTable> {
    opts: SolveOptions,
    table: T,
    clock: Option<Box<dyn Clock>>,
    stats: SearchStats,
    started_ms: u64,
}

impl Solver<MemoTable> {
    pub fn new(opts: SolveOptions) -> Self {
        let table = MemoTable::with_capacity_limit(opts.memo_capacity);
        Solver::with_table(opts, table)
    }
}

impl<T: TranspositionTable> Solver<T> {
    pub fn with_table(opts: SolveOptions, table: T) -> Self {
        Solver {
            opts,
            table,
            clock: None,
            stats: SearchStats::default(),
            started_ms: 0,
        }
    }

    pub fn with_clock(mut self, clock: Box<dyn Clock>) -> Self {
        self.clock = Some(clock);
        self
    }

    pub fn options(&self) -> &SolveOptions {
        &self.opts
    }

    pub fn table(&self) -> &T {
        &self.table
    }

    pub fn into_table(self) -> T {
        self.table
    }

    /// Counters of the most recent `solve` or `best_move`, or accumulated
    /// over `value` calls since then.
    pub fn stats(&self) -> SearchStats {
        self.stats
    }

    fn begin(&mut self) {
        self.stats = SearchStats::default();
        self.started_ms = self.clock.as_ref().map_or(0, |c| c.now_ms());
    }

    fn finish(&mut self) -> SearchStats {
        if let Some(c) = &self.clock {
            self.stats.elapsed_ms = c.now_ms().saturating_sub(self.started_ms);
        }
        self.stats
    }

    /// Exact value of `g` with P1 to move.
    pub fn solve(&mut self, g: &LoopyMultigraph) -> Result<GameValue, SolveError> {
        self.begin();
        let v = self.search(g, -INF, INF);
        let stats = self.finish();
        GameValue::at_root(g.vertex_count(), v?, stats)
    }

    /// Mover-relative differential of `g`, keeping the current stats running.
    pub fn value(&mut self, g: &LoopyMultigraph) -> Result<i32, SolveError> {
        self.search(g, -INF, INF)
    }

    /// An optimal move and the root value. Among optimal moves the one whose
    /// successor has the least canonical key wins, then the least endpoint pair.
    pub fn best_move(&mut self, g: &LoopyMultigraph) -> Result<(EdgeRef, GameValue), SolveError> {
        if g.is_empty() {
            return Err(SolveError::EmptyPosition);
        }
        self.begin();
        let mut best: Option<(i32, CanonicalKey, EdgeRef)> = None;
        for e in g.distinct_moves(false) {
            let out = g.remove_edge(e).expect("move from the position's own edge list");
            let c = out.captured as i32;
            let v = if c > 0 {
                c + self.search(&out.successor, -INF, INF)?
            } else {
                -self.search(&out.successor, -INF, INF)?
            };
            let better = match &best {
                None => true,
                Some((bv, _, _)) if v > *bv => true,
                Some((bv, _, _)) if v < *bv => false,
                Some((_, bk, _)) => canonical::canonical_key(&out.successor) < *bk,
            };
            if better {
                best = Some((v, canonical::canonical_key(&out.successor), e));
            }
        }
        let (v, _, e) = best.expect("non-empty position has a move");
        let stats = self.finish();
        Ok((e, GameValue::at_root(g.vertex_count(), v, stats)?))
    }

    /// Every move class with its exact value for the mover.
    pub fn move_values(&mut self, g: &LoopyMultigraph) -> Result<Vec<(EdgeRef, i32)>, SolveError> {
        let mut out = Vec::new();
        for e in g.distinct_moves(false) {
            let o = g.remove_edge(e).expect("own edge");
            let c = o.captured as i32;
            let v = if c > 0 {
                c + self.search(&o.successor, -INF, INF)?
            } else {
                -self.search(&o.successor, -INF, INF)?
            };
            out.push((e, v));
        }
        Ok(out)
    }

    fn check_budget(&self) -> Result<(), SolveError> {
        if let Some(limit) = self.opts.node_limit {
            if self.stats.nodes > limit {
                return Err(SolveError::Aborted(AbortReason::NodeLimit));
            }
        }
        if let (Some(budget), Some(clock)) = (self.opts.time_budget_ms, &self.clock) {
            if self.stats.nodes % 256 == 0 && clock.now_ms().saturating_sub(self.started_ms) > budget {
                return Err(SolveError::Aborted(AbortReason::TimeBudget));
            }
        }
        Ok(())
    }

    fn search(&mut self, g: &LoopyMultigraph, mut alpha: i32, mut beta: i32) -> Result<i32, SolveError> {
        if g.is_empty() {
            return Ok(0);
        }
        let r = g.vertex_count() as i32;
        let pruning = self.opts.pruning;
        if pruning {
            alpha = alpha.max(-r);
            beta = beta.min(r);
            if alpha >= r {
                return Ok(r);
            }
            if beta <= -r {
                return Ok(-r);
            }
        } else {
            alpha = -INF;
            beta = INF;
        }

        let form: Option<CanonicalForm> = if self.opts.memo || self.opts.orbit_dedup {
            Some(canonical::canonical_form(g))
        } else {
            None
        };
        if self.opts.memo {
            let key = &form.as_ref().unwrap().key;
            if let Some(e) = self.table.probe(key) {
                let v = e.value as i32;
                match e.bound {
                    Bound::Exact => {
                        self.stats.memo_hits += 1;
                        return Ok(v);
                    }
                    Bound::Lower if pruning => {
                        if v >= beta {
                            self.stats.memo_hits += 1;
                            return Ok(v);
                        }
                        alpha = alpha.max(v);
                    }
                    Bound::Upper if pruning => {
                        if v <= alpha {
                            self.stats.memo_hits += 1;
                            return Ok(v);
                        }
                        beta = beta.min(v);
                    }
                    _ => {}
                }
            }
        }

        self.stats.nodes += 1;
        self.check_budget()?;

        let mut moves = match &form {
            Some(f) if self.opts.orbit_dedup => canonical::orbit_representatives_with(g, f),
            _ => g.distinct_moves(false),
        };
        order_moves(g, &mut moves);

        let alpha0 = alpha;
        let mut best = -INF;
        for e in moves {
            let out = g.remove_edge(e).expect("move from the position's own edge list");
            let c = out.captured as i32;
            let v = if c > 0 {
                c + self.search(&out.successor, alpha - c, beta - c)?
            } else {
                -self.search(&out.successor, -beta, -alpha)?
            };
            if v > best {
                best = v;
            }
            if best >= r {
                break;
            }
            if pruning {
                alpha = alpha.max(best);
                if alpha >= beta {
                    break;
                }
            }
        }

        if let Some(f) = form {
            if self.opts.memo {
                let bound = if !pruning || best >= r {
                    Bound::Exact
                } else if best <= alpha0 {
                    Bound::Upper
                } else if best >= beta {
                    Bound::Lower
                } else {
                    Bound::Exact
                };
                self.table.store(
                    f.key,
                    Entry {
                        value: best as i16,
                        bound,
                    },
                );
            }
        }
        Ok(best)
    }
}

// Captures first, then moves that leave no vertex capturable, then the rest.
fn order_moves(g: &LoopyMultigraph, moves: &mut [EdgeRef]) {
    moves.sort_by_key(|&e| {
        let captured = g.capture_count(e);
        let (u, v) = e.endpoints();
        let offers = g.incident_count(u) == 2 || (!e.is_loop() && g.incident_count(v) == 2);
        (core::cmp::Reverse(captured), offers, e)
    });
}

/// Convenience: solve with a fresh solver.
pub fn solve(g: &LoopyMultigraph, opts: SolveOptions) -> Result<GameValue, SolveError> {
    Solver::new(opts).solve(g)
}

/// Convenience: best move with a fresh solver.
pub fn best_move(g: &LoopyMultigraph, opts: SolveOptions) -> Result<(EdgeRef, GameValue), SolveError> {
    Solver::new(opts).best_move(g)
}

#[derive(Clone, Debug, PartialEq)]
pub struct TableRow {
    pub param: u32,
    pub spec: FamilySpec,
    pub vertices: usize,
    pub outcome: Result<GameValue, SolveError>,
}

/// Solves one family member per parameter in `from..=to`, in ascending order.
///
/// Stops after the first aborted row; completed rows are kept.
pub fn make_table<F, T>(
    template: F,
    from: u32,
    to: u32,
    solver: &mut Solver<T>,
) -> Result<Vec<TableRow>, FamilyError>
where
    F: Fn(u32) -> Result<FamilySpec, FamilyError>,
    T: TranspositionTable,
{
    let specs: Vec<FamilySpec> = (from..=to).map(&template).collect::<Result<_, _>>()?;
    let mut rows = Vec::with_capacity(specs.len());
    for (param, spec) in (from..=to).zip(specs) {
        let g = crate::families::generate(&spec)?;
        let outcome = solver.solve(&g);
        let aborted = outcome.is_err();
        rows.push(TableRow {
            param,
            spec,
            vertices: g.vertex_count(),
            outcome,
        });
        if aborted {
            break;
        }
    }
    Ok(rows)
}
