//! Partial sum of `r = sqrt(n)` numbers in `[0, r]` on top of interval union
//! over `[0, n]`: number `i` is the interval `[(i-1)r, (i-1)r + A_i]` in block `i`.

use crate::probe::{Addr, CellProbe};
use crate::structures::{unsupported, IntervalUnion, SegmentTree, Structure};
use crate::trace::Op;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct PsViaDiu<I> {
    root: u64,
    inner: I,
    shadow_base: Addr,
}

impl PsViaDiu<SegmentTree> {
    pub fn with_segment_tree(n: u64, w: u32) -> Result<Self> {
        Self::new(n, w, SegmentTree::new)
    }
}

impl<I: IntervalUnion> PsViaDiu<I> {
    pub fn new(n: u64, w: u32, make_inner: impl FnOnce(u64, u32, Addr) -> Result<I>) -> Result<Self> {
        let root = n.isqrt();
        if n == 0 || root * root != n {
            return Err(Error::Config(format!("n = {n} is not a positive perfect square")));
        }
        let inner = make_inner(n, w, 0)?;
        let shadow_base = inner.footprint();
        Ok(Self { root, inner, shadow_base })
    }

    /// Number of entries, `sqrt(n)`.
    pub fn len(&self) -> u64 {
        self.root
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn check_index(&self, i: u64) -> Result<()> {
        if (1..=self.root).contains(&i) {
            Ok(())
        } else {
            Err(Error::Range(format!("index {i} outside [1, {}]", self.root)))
        }
    }

    pub fn update(&self, mem: &mut dyn CellProbe, i: u64, v: u64) -> Result<()> {
        self.check_index(i)?;
        if v > self.root {
            return Err(Error::Range(format!("value {v} outside [0, {}]", self.root)));
        }
        let slot = self.shadow_base + i - 1;
        let old = mem.read(slot)?;
        let start = (i - 1) * self.root;
        if old != 0 {
            self.inner.delete(mem, start, start + old)?;
        }
        if v != 0 {
            self.inner.insert(mem, start, start + v)?;
        }
        mem.write(slot, v)?;
        Ok(())
    }

    pub fn query(&self, mem: &mut dyn CellProbe, l: u64) -> Result<u64> {
        self.check_index(l)?;
        let n = self.root * self.root;
        let mask = (l * self.root, n);
        if mask.0 < mask.1 {
            self.inner.insert(mem, mask.0, mask.1)?;
        }
        let union = self.inner.query(mem)?;
        if mask.0 < mask.1 {
            self.inner.delete(mem, mask.0, mask.1)?;
        }
        union
            .checked_sub((self.root - l) * self.root)
            .ok_or_else(|| Error::Invariant("union shorter than its mask".into()))
    }
}

impl<I: IntervalUnion> Structure for PsViaDiu<I> {
    fn name(&self) -> String {
        format!("ps_via_diu({})", self.inner.backend_name())
    }

    fn apply(&self, mem: &mut dyn CellProbe, op: &Op) -> Result<Option<u64>> {
        match *op {
            Op::PsUpdate { i, v } => self.update(mem, i, v).map(|_| None),
            Op::PsQuery { l } => self.query(mem, l).map(Some),
            ref other => Err(unsupported(&self.name(), other)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probe::CellMemory;

    #[test]
    fn n16_example() {
        let ps = PsViaDiu::with_segment_tree(16, 64).unwrap();
        let mut m = CellMemory::with_default_word_size();
        for (i, v) in [(1, 2), (2, 0), (3, 3), (4, 1)] {
            ps.update(&mut m, i, v).unwrap();
        }
        // mask [8, 16]: union 2 + 8 = 10, minus (4 - 2) * 4 = 8
        assert_eq!(ps.query(&mut m, 2).unwrap(), 2);
        assert_eq!(ps.query(&mut m, 4).unwrap(), 6);
        assert_eq!(ps.query(&mut m, 1).unwrap(), 2);
    }

    #[test]
    fn zeros_and_errors() {
        let ps = PsViaDiu::with_segment_tree(64, 64).unwrap();
        let mut m = CellMemory::with_default_word_size();
        for l in 1..=8 {
            assert_eq!(ps.query(&mut m, l).unwrap(), 0);
        }
        assert!(matches!(PsViaDiu::with_segment_tree(15, 64), Err(Error::Config(_))));
        assert!(ps.update(&mut m, 1, 9).is_err());
        assert!(ps.query(&mut m, 0).is_err());
        ps.update(&mut m, 3, 8).unwrap();
        ps.update(&mut m, 3, 5).unwrap();
        assert_eq!(ps.query(&mut m, 8).unwrap(), 5);
    }
}
