//! Baseline backend: one cover count per unit segment; the query scans all of them.

use crate::probe::{word_mask, Addr, CellProbe};
use crate::structures::interval::{check_address_space, Interval, IntervalUnion, MultiplicityLedger};
use crate::structures::Structure;
use crate::trace::Op;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaiveBitmap {
    n: u64,
    base: Addr,
    ledger: MultiplicityLedger,
}

impl NaiveBitmap {
    pub fn new(n: u64, word_size: u32, base: Addr) -> Result<Self> {
        if n == 0 {
            return Err(Error::Config("naive backend needs n >= 1".into()));
        }
        let this = Self { n, base, ledger: MultiplicityLedger::new(base + n, n) };
        check_address_space(base, this.footprint(), word_size, "naive backend")?;
        Ok(this)
    }

    fn shift(&self, mem: &mut dyn CellProbe, iv: Interval, add: bool) -> Result<()> {
        let limit = word_mask(mem.word_size());
        for k in iv.a..iv.b {
            let addr = self.base + k;
            let c = mem.read(addr)?;
            let next = if add {
                if c == limit {
                    return Err(Error::Range(format!("cover count of segment {k} overflows")));
                }
                c + 1
            } else {
                c.checked_sub(1)
                    .ok_or_else(|| Error::Invariant(format!("cover count of segment {k} underflows")))?
            };
            mem.write(addr, next)?;
        }
        Ok(())
    }
}

impl IntervalUnion for NaiveBitmap {
    fn universe(&self) -> u64 {
        self.n
    }

    fn backend_name(&self) -> &'static str {
        "naive_bitmap"
    }

    fn insert(&self, mem: &mut dyn CellProbe, a: u64, b: u64) -> Result<()> {
        let iv = Interval::new(a, b, self.n)?;
        self.ledger.increment(mem, iv)?;
        self.shift(mem, iv, true)
    }

    fn delete(&self, mem: &mut dyn CellProbe, a: u64, b: u64) -> Result<()> {
        let iv = Interval::new(a, b, self.n)?;
        self.ledger.decrement(mem, iv)?;
        self.shift(mem, iv, false)
    }

    fn query(&self, mem: &mut dyn CellProbe) -> Result<u64> {
        let mut covered = 0;
        for k in 0..self.n {
            if mem.read(self.base + k)? > 0 {
                covered += 1;
            }
        }
        Ok(covered)
    }

    fn footprint(&self) -> u64 {
        self.n + MultiplicityLedger::footprint(self.n)
    }
}

impl Structure for NaiveBitmap {
    fn name(&self) -> String {
        "naive_bitmap".into()
    }

    fn apply(&self, mem: &mut dyn CellProbe, op: &Op) -> Result<Option<u64>> {
        self.apply_op(mem, op)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probe::CellMemory;

    #[test]
    fn basic_semantics() {
        let t = NaiveBitmap::new(10, 64, 0).unwrap();
        let mut m = CellMemory::with_default_word_size();
        assert_eq!(t.query(&mut m).unwrap(), 0);
        t.insert(&mut m, 0, 5).unwrap();
        t.insert(&mut m, 3, 8).unwrap();
        assert_eq!(t.query(&mut m).unwrap(), 8);
        t.delete(&mut m, 0, 5).unwrap();
        assert_eq!(t.query(&mut m).unwrap(), 5);
        assert!(matches!(t.delete(&mut m, 0, 5), Err(Error::Precondition(_))));
        let before = m.log().len();
        t.query(&mut m).unwrap();
        assert_eq!(m.log().len() - before, 10);
    }
}
