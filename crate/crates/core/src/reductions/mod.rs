//! Executable reductions: batch partial sum and partial sum onto dynamic
//! interval union, and dynamic interval union onto three dynamic graph
//! problems.

mod bps;
pub mod graph;
mod ps;

pub use bps::BpsViaDiu;
pub use graph::{DynamicUnion, FlowBackend, ShortestPathBackend, SccBackend};
pub use ps::PsViaDiu;

use crate::probe::CellMemory;
use crate::structures::IntervalUnion;
use crate::Result;

/// A cell-probe interval-union structure bundled with its own memory.
#[derive(Debug, Clone)]
pub struct CellBacked<I> {
    pub structure: I,
    pub memory: CellMemory,
}

impl<I: IntervalUnion> CellBacked<I> {
    pub fn new(structure: I, memory: CellMemory) -> Self {
        Self { structure, memory }
    }
}

impl<I: IntervalUnion> DynamicUnion for CellBacked<I> {
    fn name(&self) -> String {
        self.structure.backend_name().into()
    }

    fn insert(&mut self, a: u64, b: u64) -> Result<()> {
        self.structure.insert(&mut self.memory, a, b)
    }

    fn delete(&mut self, a: u64, b: u64) -> Result<()> {
        self.structure.delete(&mut self.memory, a, b)
    }

    fn query(&mut self) -> Result<u64> {
        self.structure.query(&mut self.memory)
    }
}
