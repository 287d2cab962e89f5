//! Bentley's segment tree over the unit segments `[k, k+1)` of `[0, n]`.
//!
//! Node `v` (heap order, root 1) stores the number of intervals that cover
//! its whole range without covering its parent's (the cover count) and the
//! covered length inside its range. The query reads the root length only.

use crate::probe::{word_mask, Addr, CellProbe};
use crate::structures::interval::{check_address_space, Interval, IntervalUnion, MultiplicityLedger};
use crate::structures::Structure;
use crate::trace::Op;
use crate::{Error, Result};

/// How a node's `(cover_count, covered_length)` pair maps onto cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeLayout {
    /// Both fields in one word, `w/2` bits each (count high, length low).
    Packed { half_bits: u32 },
    /// Count in cell `2v`, length in cell `2v + 1`.
    Split,
}

impl NodeLayout {
    pub fn cells_per_node(self) -> u64 {
        match self {
            NodeLayout::Packed { .. } => 1,
            NodeLayout::Split => 2,
        }
    }

    /// Worst-case probes spent on one visited node during an update: read the
    /// node, read both children's lengths, write the node back.
    pub fn probes_per_node(self) -> u64 {
        match self {
            NodeLayout::Packed { .. } => 4,
            NodeLayout::Split => 5,
        }
    }
}

/// Probe-count constants: an insert or delete costs at most
/// `c1 * log2(n) + c2` probes and a query at most `c3`.
///
/// At most four nodes are visited per tree level (two partially overlapped,
/// two fully covered) and the depth is `ceil(log2 n)`, so
/// `c1 = 4 * probes_per_node` and `c2 = 8 * probes_per_node + 2`, the `2`
/// being the multiplicity-ledger read and write.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeBounds {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl ProbeBounds {
    pub fn update_bound(&self, n: u64) -> f64 {
        self.c1 * (n.max(1) as f64).log2() + self.c2
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegmentTree {
    n: u64,
    base: Addr,
    word_size: u32,
    layout: NodeLayout,
    ledger: MultiplicityLedger,
}

impl SegmentTree {
    pub fn new(n: u64, word_size: u32, base: Addr) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("segment tree needs n >= 1".into()));
        }
        if !(1..=64).contains(&word_size) {
            return Err(Error::Config(format!("invalid word size {word_size}")));
        }
        let half_bits = word_size / 2;
        let layout = if half_bits >= 1 && n <= word_mask(half_bits) {
            NodeLayout::Packed { half_bits }
        } else if n <= word_mask(word_size) {
            NodeLayout::Split
        } else {
            return Err(Error::Config(format!("n = {n} does not fit in a {word_size}-bit word")));
        };
        let tree_cells = Self::node_slots(n) * layout.cells_per_node();
        let ledger = MultiplicityLedger::new(base + tree_cells, n);
        let this = Self { n, base, word_size, layout, ledger };
        check_address_space(base, this.footprint(), word_size, "segment tree")?;
        Ok(this)
    }

    fn node_slots(n: u64) -> u64 {
        4 * n
    }

    pub fn layout(&self) -> NodeLayout {
        self.layout
    }

    pub fn probe_bounds(&self) -> ProbeBounds {
        let ppn = self.layout.probes_per_node() as f64;
        ProbeBounds { c1: 4.0 * ppn, c2: 8.0 * ppn + 2.0, c3: 1.0 }
    }

    fn node_addr(&self, node: u64) -> Addr {
        self.base + node * self.layout.cells_per_node()
    }

    fn count_limit(&self) -> u64 {
        match self.layout {
            NodeLayout::Packed { half_bits } => word_mask(half_bits),
            NodeLayout::Split => word_mask(self.word_size),
        }
    }

    /// Reads what an update needs from the node itself: its cover count.
    fn read_count(&self, mem: &mut dyn CellProbe, node: u64) -> Result<u64> {
        let word = mem.read(self.node_addr(node))?;
        Ok(match self.layout {
            NodeLayout::Packed { half_bits } => word >> half_bits,
            NodeLayout::Split => word,
        })
    }

    fn read_len(&self, mem: &mut dyn CellProbe, node: u64) -> Result<u64> {
        Ok(match self.layout {
            NodeLayout::Packed { half_bits } => mem.read(self.node_addr(node))? & word_mask(half_bits),
            NodeLayout::Split => mem.read(self.node_addr(node) + 1)?,
        })
    }

    fn write_node(&self, mem: &mut dyn CellProbe, node: u64, count: u64, len: u64) -> Result<()> {
        let addr = self.node_addr(node);
        match self.layout {
            NodeLayout::Packed { half_bits } => mem.write(addr, (count << half_bits) | len)?,
            NodeLayout::Split => {
                mem.write(addr, count)?;
                mem.write(addr + 1, len)?;
            }
        }
        Ok(())
    }

    fn update(
        &self,
        mem: &mut dyn CellProbe,
        node: u64,
        (l, r): (u64, u64),
        iv: Interval,
        add: bool,
    ) -> Result<()> {
        let mut count = self.read_count(mem, node)?;
        if iv.a <= l && r <= iv.b {
            count = if add {
                if count == self.count_limit() {
                    return Err(Error::Range(format!("cover count of node {node} overflows")));
                }
                count + 1
            } else {
                count
                    .checked_sub(1)
                    .ok_or_else(|| Error::Invariant(format!("cover count of node {node} underflows")))?
            };
        } else {
            let mid = l + (r - l) / 2;
            if iv.a < mid {
                self.update(mem, 2 * node, (l, mid), iv, add)?;
            }
            if iv.b > mid {
                self.update(mem, 2 * node + 1, (mid, r), iv, add)?;
            }
        }
        let len = if count > 0 {
            r - l
        } else if r - l == 1 {
            0
        } else {
            self.read_len(mem, 2 * node)? + self.read_len(mem, 2 * node + 1)?
        };
        self.write_node(mem, node, count, len)
    }

    fn check_word_size(&self, mem: &dyn CellProbe) -> Result<()> {
        if mem.word_size() != self.word_size {
            return Err(Error::Config(format!(
                "segment tree laid out for w = {} but memory has w = {}",
                self.word_size,
                mem.word_size()
            )));
        }
        Ok(())
    }
}

impl IntervalUnion for SegmentTree {
    fn universe(&self) -> u64 {
        self.n
    }

    fn backend_name(&self) -> &'static str {
        "segment_tree"
    }

    fn insert(&self, mem: &mut dyn CellProbe, a: u64, b: u64) -> Result<()> {
        self.check_word_size(mem)?;
        let iv = Interval::new(a, b, self.n)?;
        self.ledger.increment(mem, iv)?;
        if !iv.is_empty() {
            self.update(mem, 1, (0, self.n), iv, true)?;
        }
        Ok(())
    }

    fn delete(&self, mem: &mut dyn CellProbe, a: u64, b: u64) -> Result<()> {
        self.check_word_size(mem)?;
        let iv = Interval::new(a, b, self.n)?;
        self.ledger.decrement(mem, iv)?;
        if !iv.is_empty() {
            self.update(mem, 1, (0, self.n), iv, false)?;
        }
        Ok(())
    }

    fn query(&self, mem: &mut dyn CellProbe) -> Result<u64> {
        self.check_word_size(mem)?;
        self.read_len(mem, 1)
    }

    fn footprint(&self) -> u64 {
        Self::node_slots(self.n) * self.layout.cells_per_node() + MultiplicityLedger::footprint(self.n)
    }
}

impl Structure for SegmentTree {
    fn name(&self) -> String {
        "segment_tree".into()
    }

    fn apply(&self, mem: &mut dyn CellProbe, op: &Op) -> Result<Option<u64>> {
        self.apply_op(mem, op)
    }
}
