//! Dynamic interval union answered by maintaining a graph and running a
//! static graph algorithm at query time.

mod flow;
mod scc;
mod shortest_path;

use std::collections::BTreeMap;

use crate::structures::Interval;
use crate::{Error, Result};

pub use flow::FlowBackend;
pub use scc::SccBackend;
pub use shortest_path::ShortestPathBackend;

/// Insert/delete/query interface shared by every interval-union backend,
/// cell-probe or not.
pub trait DynamicUnion {
    fn name(&self) -> String;
    fn insert(&mut self, a: u64, b: u64) -> Result<()>;
    fn delete(&mut self, a: u64, b: u64) -> Result<()>;
    fn query(&mut self) -> Result<u64>;
}

/// A directed edge; `weight` is the edge length, or the cost for flow networks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub capacity: u64,
    pub weight: i64,
}

/// Live interval multiset with deletion validation, shared by the graph backends.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub(crate) struct IntervalBag {
    n: u64,
    counts: BTreeMap<Interval, u64>,
    size: u64,
}

impl IntervalBag {
    pub(crate) fn new(n: u64) -> Self {
        Self { n, counts: BTreeMap::new(), size: 0 }
    }

    pub(crate) fn universe(&self) -> u64 {
        self.n
    }

    pub(crate) fn size(&self) -> u64 {
        self.size
    }

    pub(crate) fn insert(&mut self, a: u64, b: u64) -> Result<Interval> {
        let iv = Interval::new(a, b, self.n)?;
        *self.counts.entry(iv).or_insert(0) += 1;
        self.size += 1;
        Ok(iv)
    }

    pub(crate) fn delete(&mut self, a: u64, b: u64) -> Result<Interval> {
        let iv = Interval::new(a, b, self.n)?;
        match self.counts.get_mut(&iv) {
            Some(c) => {
                *c -= 1;
                if *c == 0 {
                    self.counts.remove(&iv);
                }
                self.size -= 1;
                Ok(iv)
            }
            None => Err(Error::Precondition(format!("[{a}, {b}] is not present"))),
        }
    }

    pub(crate) fn iter(&self) -> impl Iterator<Item = (Interval, u64)> + '_ {
        self.counts.iter().map(|(&iv, &c)| (iv, c))
    }
}

pub(crate) fn vertex(x: u64) -> Result<usize> {
    usize::try_from(x).map_err(|_| Error::Config(format!("vertex {x} exceeds the address width")))
}
