//! File formats, a concurrent memo, and the command-line front end for
//! [`snc_core`].

pub mod cache;
pub mod cli;
pub mod edge_list;
pub mod output;
pub mod parallel;

pub use cache::{CacheError, CacheFile, CacheRecord};
pub use edge_list::{parse_edge_list, write_edge_list, EdgeListError};
pub use output::{OutputRow, TSV_HEADER};
pub use parallel::{solve_parallel, SharedTable, StdClock};
