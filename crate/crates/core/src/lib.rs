//! Exact solving of Strings-and-Coins positions.
//!
//! Players alternately delete edges of a multigraph with loops. Deleting the
//! last edge at a vertex captures it, scores a point and grants another move.
//! This crate holds the position model, canonical keys, family generators,
//! the memoized negamax solver and mechanical strategy checks. It needs only
//! `alloc`; file formats and the command line live in the `snc-tools` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod canonical;
pub mod claims;
pub mod families;
pub mod graph;
pub mod solver;
pub mod strategies;

pub use canonical::{are_isomorphic, canonical_form, canonical_key, color_refine, CanonicalKey, ColoredPartition};
pub use families::{generate, parse_family, FamilyError, FamilySpec};
pub use graph::{EdgeRef, GraphError, LoopyMultigraph, MoveOutcome, Vertex};
pub use solver::{
    best_move, make_table, scores_from_value, solve, GameValue, SolveError, SolveOptions, Solver, Winner,
};
