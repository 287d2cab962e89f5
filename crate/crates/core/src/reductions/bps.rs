//! Batch partial sum on top of an interval-union structure.
//!
//! The `K` sequences are concatenated; entry `k = (i-1)B + j` owns the
//! segment `[(k-1)p, kp]` of `[0, KBp]` and a nonzero value `v` is stored as
//! the single interval `[(k-1)p, (k-1)p + v]`. A query masks every entry it
//! does not sum by covering the rest of each sequence, so the union length is
//! the wanted sum plus multiples of `p`.

use crate::field::PrimeField;
use crate::probe::{Addr, CellProbe};
use crate::structures::{unsupported, IntervalUnion, NaiveBitmap, SegmentTree, Structure};
use crate::trace::Op;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct BpsViaDiu<I> {
    k: usize,
    b: u64,
    field: PrimeField,
    inner: I,
    shadow_base: Addr,
}

impl BpsViaDiu<SegmentTree> {
    pub fn with_segment_tree(k: usize, b: u64, p: u64, w: u32) -> Result<Self> {
        Self::new(k, b, p, w, SegmentTree::new)
    }
}

impl BpsViaDiu<NaiveBitmap> {
    pub fn with_naive(k: usize, b: u64, p: u64, w: u32) -> Result<Self> {
        Self::new(k, b, p, w, NaiveBitmap::new)
    }
}

impl<I: IntervalUnion> BpsViaDiu<I> {
    /// `make_inner(n, w, base)` builds the interval structure over `[0, n]`, `n = K B p`.
    pub fn new(
        k: usize,
        b: u64,
        p: u64,
        w: u32,
        make_inner: impl FnOnce(u64, u32, Addr) -> Result<I>,
    ) -> Result<Self> {
        if k == 0 || b == 0 {
            return Err(Error::Config(format!("need K, B >= 1 (got K = {k}, B = {b})")));
        }
        let field = PrimeField::new(p)?;
        if b > p {
            return Err(Error::Config(format!("need B <= p (got B = {b}, p = {p})")));
        }
        let n = (k as u64)
            .checked_mul(b)
            .and_then(|x| x.checked_mul(p))
            .ok_or_else(|| Error::Config("K * B * p overflows".into()))?;
        let inner = make_inner(n, w, 0)?;
        let shadow_base = inner.footprint();
        crate::structures::check_address_space(
            0,
            shadow_base + k as u64 * b,
            w,
            "bps adapter",
        )?;
        Ok(Self { k, b, field, inner, shadow_base })
    }

    pub fn inner(&self) -> &I {
        &self.inner
    }

    pub fn universe(&self) -> u64 {
        self.inner.universe()
    }

    /// Addresses of the old-value table, for separating its probes in reports.
    pub fn shadow_range(&self) -> std::ops::Range<Addr> {
        self.shadow_base..self.shadow_base + self.k as u64 * self.b
    }

    fn p(&self) -> u64 {
        self.field.modulus()
    }

    /// Left end of the segment of entry `(i, j)`, `i` 0-based, `j` 1-based.
    fn segment_start(&self, i: usize, j: u64) -> u64 {
        (i as u64 * self.b + j - 1) * self.p()
    }

    fn validate_j(&self, j: &[u64]) -> Result<()> {
        if j.len() != self.k {
            return Err(Error::Shape(format!("j has length {}, expected K = {}", j.len(), self.k)));
        }
        if let Some(&bad) = j.iter().find(|&&x| x == 0 || x > self.b) {
            return Err(Error::Range(format!("index {bad} outside [1, {}]", self.b)));
        }
        Ok(())
    }

    /// Performs the update and returns the interval operations it issued.
    pub fn update(&self, mem: &mut dyn CellProbe, j: &[u64], v: &[u64]) -> Result<Vec<Op>> {
        self.validate_j(j)?;
        if v.len() != self.k {
            return Err(Error::Shape(format!("v has length {}, expected K = {}", v.len(), self.k)));
        }
        for &x in v {
            self.field.check(x)?;
        }
        let mut issued = Vec::with_capacity(2 * self.k);
        for (i, (&ji, &vi)) in j.iter().zip(v).enumerate() {
            let slot = self.shadow_base + i as u64 * self.b + (ji - 1);
            let old = mem.read(slot)?;
            let start = self.segment_start(i, ji);
            if old != 0 {
                self.inner.delete(mem, start, start + old)?;
                issued.push(Op::Delete { a: start, b: start + old });
            }
            if vi != 0 {
                self.inner.insert(mem, start, start + vi)?;
                issued.push(Op::Insert { a: start, b: start + vi });
            }
            mem.write(slot, vi)?;
        }
        Ok(issued)
    }

    /// Answers the query; also returns the interval operations it issued.
    pub fn query(&self, mem: &mut dyn CellProbe, j: &[u64]) -> Result<(u64, Vec<Op>)> {
        let (union, issued) = self.query_union(mem, j)?;
        Ok((self.field.reduce(union), issued))
    }

    /// Like [`query`](Self::query) but returns the raw union length seen
    /// while the masks were present, before reduction mod `p`.
    pub fn query_union(&self, mem: &mut dyn CellProbe, j: &[u64]) -> Result<(u64, Vec<Op>)> {
        self.validate_j(j)?;
        let mut masks = Vec::with_capacity(self.k);
        for (i, &ji) in j.iter().enumerate() {
            let a = (i as u64 * self.b + ji) * self.p();
            let b = (i as u64 + 1) * self.b * self.p();
            if a < b {
                masks.push((a, b));
            }
        }
        let mut issued = Vec::with_capacity(2 * masks.len() + 1);
        for &(a, b) in &masks {
            self.inner.insert(mem, a, b)?;
            issued.push(Op::Insert { a, b });
        }
        let union = self.inner.query(mem)?;
        issued.push(Op::Query);
        for &(a, b) in &masks {
            self.inner.delete(mem, a, b)?;
            issued.push(Op::Delete { a, b });
        }
        Ok((union, issued))
    }
}

impl<I: IntervalUnion> Structure for BpsViaDiu<I> {
    fn name(&self) -> String {
        format!("bps_via_diu({})", self.inner.backend_name())
    }

    fn apply(&self, mem: &mut dyn CellProbe, op: &Op) -> Result<Option<u64>> {
        match op {
            Op::BpsUpdate { j, v } => self.update(mem, j, v).map(|_| None),
            Op::BpsQuery { j } => self.query(mem, j).map(|(ans, _)| Some(ans)),
            other => Err(unsupported(&self.name(), other)),
        }
    }
}
