use std::fmt;
use std::ops::Range;

use crate::{Error, Result};

/// `rev_b(t)`: the integer whose `b`-bit representation is that of `t` reversed.
pub fn bit_reverse(t: u64, b: u32) -> Result<u64> {
    if b > 63 || t >> b != 0 {
        return Err(Error::Range(format!("{t} does not fit in {b} bits")));
    }
    Ok(if b == 0 { 0 } else { t.reverse_bits() >> (64 - b) })
}

/// A binary string `s` with `|s| < b`, naming the operations `U_t, Q_t` of a
/// `2B`-operation hard sequence whose `b`-bit index `t` starts with `s`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyadicLabel {
    bits: Vec<bool>,
    b: u32,
}

impl DyadicLabel {
    pub fn root(b: u32) -> Result<Self> {
        Self::new(Vec::new(), b)
    }

    pub fn new(bits: Vec<bool>, b: u32) -> Result<Self> {
        if b > 40 {
            return Err(Error::Config(format!("b = {b} is too large")));
        }
        if bits.len() >= b as usize {
            return Err(Error::Config(format!(
                "label of length {} needs |s| < b = {b}",
                bits.len()
            )));
        }
        Ok(Self { bits, b })
    }

    /// Parses `"0110"`; the empty string, `"-"` and `"root"` name the empty label.
    pub fn parse(s: &str, b: u32) -> Result<Self> {
        let s = s.trim();
        let body = if s == "-" || s.eq_ignore_ascii_case("root") { "" } else { s };
        let bits = body
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Config(format!("label character {other:?} is not 0 or 1"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(bits, b)
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn depth_limit(&self) -> u32 {
        self.b
    }

    /// The range of `t` whose top `|s|` bits equal `s`.
    pub fn t_range(&self) -> Range<u64> {
        let prefix = self.bits.iter().fold(0u64, |acc, &x| (acc << 1) | u64::from(x));
        let shift = self.b - self.bits.len() as u32;
        (prefix << shift)..((prefix + 1) << shift)
    }

    /// Operation indices of `I_s`: `U_t` sits at `2t` and `Q_t` at `2t + 1`.
    pub fn op_range(&self) -> Range<usize> {
        let t = self.t_range();
        (2 * t.start as usize)..(2 * t.end as usize)
    }

    /// Operation range of `I_{s0}`, which plays the role of `I_A`.
    pub fn left_ops(&self) -> Range<usize> {
        let r = self.op_range();
        r.start..(r.start + r.len() / 2)
    }

    /// Operation range of `I_{s1}`, which plays the role of `I_B`.
    pub fn right_ops(&self) -> Range<usize> {
        let r = self.op_range();
        (r.start + r.len() / 2)..r.end
    }

    /// The child `s0` or `s1`, if it is still a valid label.
    pub fn child(&self, bit: bool) -> Option<Self> {
        let mut bits = self.bits.clone();
        bits.push(bit);
        Self::new(bits, self.b).ok()
    }

    /// Every label with `|s| < b`, shortest first and lexicographic within a length.
    pub fn all(b: u32) -> Vec<Self> {
        let mut out = Vec::new();
        for len in 0..b {
            for prefix in 0..(1u64 << len) {
                let bits = (0..len).rev().map(|k| (prefix >> k) & 1 == 1).collect();
                out.push(Self { bits, b });
            }
        }
        out
    }
}

impl fmt::Display for DyadicLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &x in &self.bits {
            f.write_str(if x { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reversal_examples() {
        assert_eq!(bit_reverse(1, 3).unwrap(), 4);
        assert_eq!(bit_reverse(6, 3).unwrap(), 3);
        assert_eq!(bit_reverse(0, 0).unwrap(), 0);
        assert!(bit_reverse(8, 3).is_err());
    }

    #[test]
    fn labels_and_ranges() {
        let s = DyadicLabel::parse("01", 3).unwrap();
        assert_eq!(s.t_range(), 2..4);
        assert_eq!(s.op_range(), 4..8);
        assert_eq!(s.left_ops(), 4..6);
        assert_eq!(s.right_ops(), 6..8);
        assert_eq!(s.to_string(), "01");
        assert!(s.child(true).is_none());
        let root = DyadicLabel::parse("root", 4).unwrap();
        assert_eq!(root.op_range(), 0..32);
        assert_eq!(root.right_ops(), 16..32);
        assert!(DyadicLabel::parse("012", 5).is_err());
        assert!(DyadicLabel::parse("000", 3).is_err());
        assert_eq!(DyadicLabel::all(3).len(), 7);
    }
}
