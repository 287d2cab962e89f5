//! Probe-instrumented data structures for dynamic interval union and batch
//! partial sums, the reductions between them, hard-instance generators, and
//! a simulator for the Merlin-assisted communication game used to analyse
//! them.

pub mod backend;
pub mod comm_game;
pub mod error;
pub mod field;
pub mod hard_instances;
pub mod klee;
pub mod multi_index;
pub mod probe;
pub mod reductions;
pub mod report;
pub mod structures;
pub mod trace;
pub mod workload;

pub use error::{Error, Result};
