//! `K` sequences of length `B` over `F_p`, each kept as raw entries plus a
//! Fenwick tree of the same entries.

use crate::field::PrimeField;
use crate::probe::{word_mask, Addr, CellProbe};
use crate::structures::interval::check_address_space;
use crate::structures::{unsupported, Structure};
use crate::trace::Op;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpSequenceBank {
    k: usize,
    b: u64,
    field: PrimeField,
    base: Addr,
}

impl FpSequenceBank {
    pub fn new(k: usize, b: u64, p: u64, word_size: u32, base: Addr) -> Result<Self> {
        if k == 0 || b == 0 {
            return Err(Error::Config(format!("need K, B >= 1 (got K = {k}, B = {b})")));
        }
        let field = PrimeField::new(p)?;
        if p - 1 > word_mask(word_size) {
            return Err(Error::Config(format!("residues mod {p} do not fit in {word_size} bits")));
        }
        let this = Self { k, b, field, base };
        check_address_space(base, this.footprint(), word_size, "sequence bank")?;
        Ok(this)
    }

    pub fn sequences(&self) -> usize {
        self.k
    }

    pub fn length(&self) -> u64 {
        self.b
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn footprint(&self) -> u64 {
        2 * self.k as u64 * self.b
    }

    fn entry_addr(&self, i: usize, j: u64) -> Addr {
        self.base + i as u64 * self.b + (j - 1)
    }

    fn fenwick_addr(&self, i: usize, j: u64) -> Addr {
        self.base + (self.k as u64 + i as u64) * self.b + (j - 1)
    }

    fn check_index(&self, j: u64) -> Result<u64> {
        if (1..=self.b).contains(&j) {
            Ok(j)
        } else {
            Err(Error::Range(format!("index {j} outside [1, {}]", self.b)))
        }
    }

    fn check_shape(&self, len: usize, what: &str) -> Result<()> {
        if len != self.k {
            return Err(Error::Shape(format!("{what} has length {len}, expected K = {}", self.k)));
        }
        Ok(())
    }

    /// Sets `A[i][j]` (0-based sequence, 1-based entry) to `v`.
    pub fn set_entry(&self, mem: &mut dyn CellProbe, i: usize, j: u64, v: u64) -> Result<()> {
        let f = self.field;
        let addr = self.entry_addr(i, j);
        let old = mem.read(addr)?;
        mem.write(addr, v)?;
        let delta = f.sub(v, old);
        if delta == 0 {
            return Ok(());
        }
        let mut idx = j;
        while idx <= self.b {
            let a = self.fenwick_addr(i, idx);
            let cur = mem.read(a)?;
            mem.write(a, f.add(cur, delta))?;
            idx += idx & idx.wrapping_neg();
        }
        Ok(())
    }

    /// `sum_{l <= j} A[i][l]` for one sequence.
    pub fn prefix(&self, mem: &mut dyn CellProbe, i: usize, j: u64) -> Result<u64> {
        let f = self.field;
        let mut acc = 0;
        let mut idx = j;
        while idx > 0 {
            acc = f.add(acc, mem.read(self.fenwick_addr(i, idx))?);
            idx &= idx - 1;
        }
        Ok(acc)
    }

    pub fn entry(&self, mem: &mut dyn CellProbe, i: usize, j: u64) -> Result<u64> {
        self.check_index(j)?;
        Ok(mem.read(self.entry_addr(i, j))?)
    }

    pub fn update(&self, mem: &mut dyn CellProbe, j: &[u64], v: &[u64]) -> Result<()> {
        self.check_shape(j.len(), "j")?;
        self.check_shape(v.len(), "v")?;
        for (&ji, &vi) in j.iter().zip(v) {
            self.check_index(ji)?;
            self.field.check(vi)?;
        }
        for (i, (&ji, &vi)) in j.iter().zip(v).enumerate() {
            self.set_entry(mem, i, ji, vi)?;
        }
        Ok(())
    }

    pub fn query(&self, mem: &mut dyn CellProbe, j: &[u64]) -> Result<u64> {
        self.check_shape(j.len(), "j")?;
        for &ji in j {
            self.check_index(ji)?;
        }
        let mut acc = 0;
        for (i, &ji) in j.iter().enumerate() {
            acc = self.field.add(acc, self.prefix(mem, i, ji)?);
        }
        Ok(acc)
    }
}

impl Structure for FpSequenceBank {
    fn name(&self) -> String {
        "bank".into()
    }

    fn apply(&self, mem: &mut dyn CellProbe, op: &Op) -> Result<Option<u64>> {
        match op {
            Op::BpsUpdate { j, v } => self.update(mem, j, v).map(|_| None),
            Op::BpsQuery { j } => self.query(mem, j).map(Some),
            other => Err(unsupported("bank", other)),
        }
    }
}

/// Partial sums over one sequence of length `len`: the `K = 1` bank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartialSum {
    bank: FpSequenceBank,
}

impl PartialSum {
    pub fn new(len: u64, p: u64, word_size: u32, base: Addr) -> Result<Self> {
        Ok(Self { bank: FpSequenceBank::new(1, len, p, word_size, base)? })
    }

    pub fn len(&self) -> u64 {
        self.bank.b
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn field(&self) -> PrimeField {
        self.bank.field
    }

    pub fn update(&self, mem: &mut dyn CellProbe, i: u64, v: u64) -> Result<()> {
        self.bank.check_index(i)?;
        self.bank.field.check(v)?;
        self.bank.set_entry(mem, 0, i, v)
    }

    pub fn query(&self, mem: &mut dyn CellProbe, l: u64) -> Result<u64> {
        self.bank.check_index(l)?;
        self.bank.prefix(mem, 0, l)
    }
}

impl Structure for PartialSum {
    fn name(&self) -> String {
        "partial_sum".into()
    }

    fn apply(&self, mem: &mut dyn CellProbe, op: &Op) -> Result<Option<u64>> {
        match *op {
            Op::PsUpdate { i, v } => self.update(mem, i, v).map(|_| None),
            Op::PsQuery { l } => self.query(mem, l).map(Some),
            ref other => Err(unsupported("partial_sum", other)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probe::CellMemory;

    #[test]
    fn bank_examples() {
        let bank = FpSequenceBank::new(2, 4, 5, 64, 0).unwrap();
        let mut m = CellMemory::with_default_word_size();
        assert_eq!(bank.query(&mut m, &[4, 4]).unwrap(), 0);
        bank.update(&mut m, &[1, 2], &[3, 4]).unwrap();
        assert_eq!(bank.entry(&mut m, 0, 1).unwrap(), 3);
        assert_eq!(bank.entry(&mut m, 1, 2).unwrap(), 4);
        assert_eq!(bank.query(&mut m, &[2, 3]).unwrap(), 2); // 3 + 4 = 7 = 2 mod 5
        bank.update(&mut m, &[1, 2], &[1, 0]).unwrap();
        assert_eq!(bank.entry(&mut m, 0, 1).unwrap(), 1);
        assert_eq!(bank.query(&mut m, &[4, 4]).unwrap(), 1);
    }

    #[test]
    fn bank_errors() {
        let bank = FpSequenceBank::new(2, 4, 5, 64, 0).unwrap();
        let mut m = CellMemory::with_default_word_size();
        assert!(matches!(bank.update(&mut m, &[1], &[3]), Err(Error::Shape(_))));
        assert!(matches!(bank.query(&mut m, &[1, 2, 3]), Err(Error::Shape(_))));
        assert!(matches!(bank.update(&mut m, &[0, 1], &[3, 3]), Err(Error::Range(_))));
        assert!(matches!(bank.update(&mut m, &[1, 5], &[3, 3]), Err(Error::Range(_))));
        assert!(matches!(bank.update(&mut m, &[1, 1], &[5, 3]), Err(Error::Range(_))));
        assert!(FpSequenceBank::new(2, 4, 6, 64, 0).is_err());
        assert!(FpSequenceBank::new(0, 4, 5, 64, 0).is_err());
    }

    #[test]
    fn partial_sum_examples() {
        let ps = PartialSum::new(8, 11, 64, 0).unwrap();
        let mut m = CellMemory::with_default_word_size();
        for l in 1..=8 {
            assert_eq!(ps.query(&mut m, l).unwrap(), 0);
        }
        ps.update(&mut m, 2, 3).unwrap();
        assert_eq!(ps.query(&mut m, 1).unwrap(), 0);
        assert_eq!(ps.query(&mut m, 2).unwrap(), 3);
        assert!(ps.query(&mut m, 9).is_err());
    }
}
