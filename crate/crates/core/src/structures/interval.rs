use serde::{Deserialize, Serialize};

use crate::probe::{word_mask, Addr, CellProbe};
use crate::trace::Op;
use crate::{Error, Result};

/// A closed integer interval `[a, b]` with `0 <= a <= b <= n`; its length is `b - a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Interval {
    pub a: u64,
    pub b: u64,
}

impl Interval {
    pub fn new(a: u64, b: u64, n: u64) -> Result<Self> {
        if a > b || b > n {
            return Err(Error::Range(format!(
                "interval [{a}, {b}] is not within [0, {n}] with a <= b"
            )));
        }
        Ok(Self { a, b })
    }

    pub fn len(&self) -> u64 {
        self.b - self.a
    }

    pub fn is_empty(&self) -> bool {
        self.a == self.b
    }
}

/// A multiset of intervals over `[0, n]` whose query is the length of the union.
pub trait IntervalUnion {
    fn universe(&self) -> u64;
    fn backend_name(&self) -> &'static str;
    fn insert(&self, mem: &mut dyn CellProbe, a: u64, b: u64) -> Result<()>;
    fn delete(&self, mem: &mut dyn CellProbe, a: u64, b: u64) -> Result<()>;
    fn query(&self, mem: &mut dyn CellProbe) -> Result<u64>;

    /// Number of cells of address space the structure occupies from its base.
    fn footprint(&self) -> u64;

    fn apply_op(&self, mem: &mut dyn CellProbe, op: &Op) -> Result<Option<u64>> {
        match *op {
            Op::Insert { a, b } => self.insert(mem, a, b).map(|_| None),
            Op::Delete { a, b } => self.delete(mem, a, b).map(|_| None),
            Op::Query => self.query(mem).map(Some),
            ref other => Err(super::unsupported(self.backend_name(), other)),
        }
    }
}

/// Per-`(a, b)` multiplicities kept in cells, used to validate deletions.
///
/// Cell `base + a * (n + 1) + b` holds the multiplicity of `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MultiplicityLedger {
    base: Addr,
    n: u64,
}

impl MultiplicityLedger {
    pub fn new(base: Addr, n: u64) -> Self {
        Self { base, n }
    }

    pub fn footprint(n: u64) -> u64 {
        (n + 1) * (n + 1)
    }

    fn addr(&self, iv: Interval) -> Addr {
        self.base + iv.a * (self.n + 1) + iv.b
    }

    pub fn increment(&self, mem: &mut dyn CellProbe, iv: Interval) -> Result<u64> {
        let addr = self.addr(iv);
        let m = mem.read(addr)?;
        if m == word_mask(mem.word_size()) {
            return Err(Error::Range(format!("multiplicity of [{}, {}] overflows a word", iv.a, iv.b)));
        }
        mem.write(addr, m + 1)?;
        Ok(m + 1)
    }

    pub fn decrement(&self, mem: &mut dyn CellProbe, iv: Interval) -> Result<u64> {
        let addr = self.addr(iv);
        let m = mem.read(addr)?;
        if m == 0 {
            return Err(Error::Precondition(format!(
                "interval [{}, {}] is not in the multiset",
                iv.a, iv.b
            )));
        }
        mem.write(addr, m - 1)?;
        Ok(m - 1)
    }
}

/// Checks that `footprint` cells starting at `base` are addressable with `w`-bit addresses.
pub(crate) fn check_address_space(base: Addr, footprint: u64, w: u32, what: &str) -> Result<()> {
    let last = base.checked_add(footprint.saturating_sub(1));
    match last {
        Some(last) if last <= word_mask(w) => Ok(()),
        _ => Err(Error::Config(format!(
            "{what} needs {footprint} cells from address {base}, more than a {w}-bit address space holds"
        ))),
    }
}
