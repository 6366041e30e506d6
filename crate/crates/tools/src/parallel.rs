//! A concurrent transposition table and a root-split parallel solve.

use std::time::Instant;

use dashmap::DashMap;
use rayon::prelude::*;
use snc_core::solver::{Bound, Clock, Entry, SearchStats, TranspositionTable};
use snc_core::{CanonicalKey, GameValue, LoopyMultigraph, SolveError, SolveOptions, Solver};

/// Wall-clock milliseconds since a fixed origin. Copies share the origin.
#[derive(Clone, Copy, Debug)]
pub struct StdClock {
    origin: Instant,
}

impl StdClock {
    pub fn new() -> Self {
        StdClock { origin: Instant::now() }
    }
}

impl Default for StdClock {
    fn default() -> Self {
        Self::new()
    }
}

impl Clock for StdClock {
    fn now_ms(&self) -> u64 {
        self.origin.elapsed().as_millis() as u64
    }
}

#[derive(Clone, Copy)]
struct Slot {
    entry: Entry,
    persisted: bool,
}

/// Thread-safe table. Exact entries are never downgraded to bounds, and
/// each entry remembers whether it already lives in a cache file.
#[derive(Default)]
pub struct SharedTable {
    map: DashMap<CanonicalKey, Slot>,
}

impl SharedTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts a value known to be exact and already persisted.
    pub fn insert_persisted(&self, key: CanonicalKey, value: i16) {
        self.map.insert(
            key,
            Slot {
                entry: Entry {
                    value,
                    bound: Bound::Exact,
                },
                persisted: true,
            },
        );
    }

    /// Exact entries sorted by key.
    pub fn exact_entries(&self) -> Vec<(CanonicalKey, i16)> {
        let mut out: Vec<_> = self
            .map
            .iter()
            .filter(|r| r.entry.bound == Bound::Exact)
            .map(|r| (r.key().clone(), r.entry.value))
            .collect();
        out.sort_unstable();
        out
    }

    /// Exact entries not yet persisted, sorted by key; marks them persisted.
    pub fn take_unpersisted(&self) -> Vec<(CanonicalKey, i16)> {
        let mut out = Vec::new();
        for mut r in self.map.iter_mut() {
            if r.entry.bound == Bound::Exact && !r.persisted {
                r.persisted = true;
                out.push((r.key().clone(), r.entry.value));
            }
        }
        out.sort_unstable();
        out
    }
}

impl TranspositionTable for SharedTable {
    fn probe(&self, key: &CanonicalKey) -> Option<Entry> {
        self.map.get(key).map(|s| s.entry)
    }

    fn store(&self, key: CanonicalKey, entry: Entry) {
        self.map
            .entry(key)
            .and_modify(|s| {
                if s.entry.bound != Bound::Exact {
                    s.entry = entry;
                }
            })
            .or_insert(Slot {
                entry,
                persisted: false,
            });
    }

    fn len(&self) -> usize {
        self.map.len()
    }
}

/// Solves `g` by splitting the root moves over `threads` workers that share
/// `table`. The value does not depend on the thread count.
pub fn solve_parallel(
    g: &LoopyMultigraph,
    opts: SolveOptions,
    threads: usize,
    table: &SharedTable,
    clock: StdClock,
) -> Result<GameValue, SolveError> {
    let start = clock.now_ms();
    if g.is_empty() {
        return GameValue::at_root(0, 0, SearchStats::default());
    }
    let moves = g.distinct_moves(opts.orbit_dedup);
    let evaluate = |e: &snc_core::EdgeRef| -> Result<(i32, SearchStats), SolveError> {
        let mut solver = Solver::with_table(opts, table).with_clock(Box::new(clock));
        let out = g.remove_edge(*e).expect("root move from the position itself");
        let c = out.captured as i32;
        let v = if c > 0 {
            c + solver.value(&out.successor)?
        } else {
            -solver.value(&out.successor)?
        };
        Ok((v, solver.stats()))
    };
    let results: Vec<Result<(i32, SearchStats), SolveError>> = if threads <= 1 {
        moves.iter().map(evaluate).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool");
        pool.install(|| moves.par_iter().map(evaluate).collect())
    };
    let mut best = i32::MIN;
    let mut stats = SearchStats {
        nodes: 1,
        ..SearchStats::default()
    };
    for r in results {
        let (v, s) = r?;
        best = best.max(v);
        stats.nodes += s.nodes;
        stats.memo_hits += s.memo_hits;
    }
    stats.elapsed_ms = clock.now_ms().saturating_sub(start);
    GameValue::at_root(g.vertex_count(), best, stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use snc_core::{generate, solve, FamilySpec};

    #[test]
    fn thread_count_does_not_change_values() {
        for spec in [
            FamilySpec::Complete(6),
            FamilySpec::Wheel(6),
            FamilySpec::Prism(4),
            FamilySpec::Friendship(3),
            FamilySpec::BalloonPath(6),
        ] {
            let g = generate(&spec).unwrap();
            let want = solve(&g, SolveOptions::default()).unwrap();
            for threads in [1, 2, 4] {
                let table = SharedTable::new();
                let got = solve_parallel(&g, SolveOptions::default(), threads, &table, StdClock::new()).unwrap();
                assert_eq!(got.differential, want.differential, "{:?} threads={}", spec, threads);
                assert_eq!((got.p1_score, got.p2_score), (want.p1_score, want.p2_score));
            }
        }
    }

    #[test]
    fn exact_entries_survive_bound_stores() {
        let t = SharedTable::new();
        let k = snc_core::canonical_key(&generate(&FamilySpec::Cycle(3)).unwrap());
        t.store(
            k.clone(),
            Entry {
                value: -3,
                bound: Bound::Exact,
            },
        );
        t.store(
            k.clone(),
            Entry {
                value: 1,
                bound: Bound::Lower,
            },
        );
        assert_eq!(t.probe(&k).unwrap().value, -3);
        assert_eq!(t.take_unpersisted(), vec![(k.clone(), -3)]);
        assert!(t.take_unpersisted().is_empty());
        assert_eq!(t.exact_entries().len(), 1);
    }

    #[test]
    fn time_budget_aborts() {
        let g = generate(&FamilySpec::Complete(8)).unwrap();
        let opts = SolveOptions {
            time_budget_ms: Some(0),
            ..SolveOptions::default()
        };
        let r = solve_parallel(&g, opts, 1, &SharedTable::new(), StdClock::new());
        assert!(matches!(r, Err(SolveError::Aborted(_))));
    }
}
