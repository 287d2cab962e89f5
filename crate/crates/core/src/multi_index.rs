//! The multi-index problem induced by a split of a hard sequence: `x` holds
//! prefix sums of the entries written in `I_A`, and each query of `I_B`
//! becomes a 0/1 vector `y_i` with at most one 1 per block.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::field::PrimeField;
use crate::hard_instances::{gen_hard_bps, DyadicLabel, HardDistParams};
use crate::trace::Op;
use crate::{Error, Result};

/// `x` in `F_p^{LK}` laid out block by block; `y[i]` lists the `(block,
/// position)` pairs, both 0-based, where vector `i` is 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiIndexInstance {
    pub p: u64,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "L")]
    pub l: usize,
    pub x: Vec<u64>,
    pub y: Vec<Vec<(usize, usize)>>,
}

impl MultiIndexInstance {
    pub fn dimension(&self) -> usize {
        self.l * self.k
    }

    /// `y[i]` as a dense 0/1 vector.
    pub fn dense_y(&self, i: usize) -> Vec<u8> {
        let mut v = vec![0u8; self.dimension()];
        for &(block, pos) in &self.y[i] {
            v[block * self.l + pos] = 1;
        }
        v
    }

    pub fn validate(&self) -> Result<()> {
        if self.x.len() != self.dimension() {
            return Err(Error::Shape(format!("x has {} coordinates, expected {}", self.x.len(), self.dimension())));
        }
        if let Some(v) = self.x.iter().find(|&&v| v >= self.p) {
            return Err(Error::Range(format!("x entry {v} is not reduced mod {}", self.p)));
        }
        for (i, yi) in self.y.iter().enumerate() {
            let mut blocks: Vec<usize> = yi.iter().map(|&(b, _)| b).collect();
            blocks.sort_unstable();
            if blocks.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Invariant(format!("y[{i}] has two ones in one block")));
            }
            if yi.iter().any(|&(b, pos)| b >= self.k || pos >= self.l) {
                return Err(Error::Range(format!("y[{i}] has a coordinate outside {}x{}", self.k, self.l)));
            }
        }
        Ok(())
    }
}

/// Entries (1-based) of each sequence updated in `I_A`, ascending, with the values written.
fn entries_in(ops: &[Op], range: std::ops::Range<usize>, k: usize) -> Result<Vec<Vec<(u64, u64)>>> {
    let mut per_seq: Vec<Vec<(u64, u64)>> = vec![Vec::new(); k];
    for op in &ops[range] {
        if let Op::BpsUpdate { j, v } = op {
            if j.len() != k || v.len() != k {
                return Err(Error::Shape(format!("update has {} indices, expected K = {k}", j.len())));
            }
            for (seq, (&e, &val)) in per_seq.iter_mut().zip(j.iter().zip(v)) {
                seq.push((e, val));
            }
        }
    }
    for seq in &mut per_seq {
        seq.sort_unstable();
        if seq.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Invariant("an entry is updated twice within I_A".into()));
        }
    }
    Ok(per_seq)
}

fn trace_width(ops: &[Op]) -> Result<usize> {
    match ops.first() {
        Some(Op::BpsUpdate { j, .. }) | Some(Op::BpsQuery { j }) => Ok(j.len()),
        _ => Err(Error::Shape("not a batch partial sum trace".into())),
    }
}

/// The mapping `F` from a hard sequence and a split to a multi-index instance.
pub fn map_f(ops: &[Op], split: &DyadicLabel, p: u64) -> Result<MultiIndexInstance> {
    let field = PrimeField::new(p)?;
    let expected = 2usize << split.depth_limit();
    if ops.len() != expected {
        return Err(Error::Shape(format!("split assumes {expected} operations, trace has {}", ops.len())));
    }
    let k = trace_width(ops)?;
    let l = split.left_ops().len() / 2;
    let entries = entries_in(ops, split.left_ops(), k)?;
    if let Some(seq) = entries.iter().find(|seq| seq.len() != l) {
        return Err(Error::Shape(format!("I_A updates {} entries of a sequence, expected {l}", seq.len())));
    }
    let mut x = Vec::with_capacity(l * k);
    for seq in &entries {
        let mut acc = 0;
        for &(_, val) in seq {
            acc = field.add(acc, field.reduce(val));
            x.push(acc);
        }
    }
    let mut y = Vec::new();
    for op in &ops[split.right_ops()] {
        if let Op::BpsQuery { j } = op {
            if j.len() != k {
                return Err(Error::Shape(format!("query has {} indices, expected K = {k}", j.len())));
            }
            let yi = j
                .iter()
                .zip(&entries)
                .enumerate()
                .filter_map(|(block, (&bound, seq))| {
                    let count = seq.partition_point(|&(e, _)| e <= bound);
                    (count > 0).then(|| (block, count - 1))
                })
                .collect();
            y.push(yi);
        }
    }
    let inst = MultiIndexInstance { p, k, l, x, y };
    inst.validate()?;
    Ok(inst)
}

/// `(<x, y_1>, ..., <x, y_L>)` over `F_p`.
pub fn eval_f(inst: &MultiIndexInstance) -> Vec<u64> {
    let field = PrimeField::new(inst.p).expect("instance modulus is prime");
    inst.y
        .iter()
        .map(|yi| yi.iter().fold(0, |acc, &(block, pos)| field.add(acc, inst.x[block * inst.l + pos])))
        .collect()
}

/// Summands of each `I_B` query that Bob knows without Alice: current values
/// of entries not written in `I_A`, summed over all sequences.
pub fn bob_known_summands(ops: &[Op], split: &DyadicLabel, b: u64, p: u64) -> Result<Vec<u64>> {
    let field = PrimeField::new(p)?;
    let k = trace_width(ops)?;
    let in_a: Vec<Vec<bool>> = {
        let entries = entries_in(ops, split.left_ops(), k)?;
        entries
            .iter()
            .map(|seq| {
                let mut mask = vec![false; b as usize + 1];
                for &(e, _) in seq {
                    mask[e as usize] = true;
                }
                mask
            })
            .collect()
    };
    let a_ops = split.left_ops();
    let mut values = vec![vec![0u64; b as usize + 1]; k];
    let mut out = Vec::new();
    for (t, op) in ops.iter().enumerate().take(split.right_ops().end) {
        match op {
            Op::BpsUpdate { j, v } if !a_ops.contains(&t) => {
                for (seq, (&e, &val)) in j.iter().zip(v).enumerate() {
                    values[seq][e as usize] = field.reduce(val);
                }
            }
            Op::BpsQuery { j } if t >= split.right_ops().start => {
                let mut sum = 0;
                for (seq, &bound) in j.iter().enumerate() {
                    for e in 1..=bound as usize {
                        if !in_a[seq][e] {
                            sum = field.add(sum, values[seq][e]);
                        }
                    }
                }
                out.push(sum);
            }
            _ => {}
        }
    }
    Ok(out)
}

/// True iff no set of at most `floor(0.1 LK)` coordinates holds more than
/// `0.9 LK` of the ones of all `L` vectors.
pub fn is_evenly_spreading(inst: &MultiIndexInstance) -> bool {
    let dim = inst.dimension();
    let mut counts = vec![0usize; dim];
    for yi in &inst.y {
        for &(block, pos) in yi {
            counts[block * inst.l + pos] += 1;
        }
    }
    counts.sort_unstable_by(|a, b| b.cmp(a));
    let top: usize = counts.iter().take(dim / 10).sum();
    10 * top <= 9 * dim
}

/// Samples `y` from its induced law: a fresh hard sequence split at the root.
pub fn sample_instance<R: Rng + ?Sized>(k: usize, b: u64, p: u64, rng: &mut R) -> Result<MultiIndexInstance> {
    let params = HardDistParams::new(k, b, p, rng.random())?;
    let trace = gen_hard_bps(&params)?;
    map_f(&trace.ops, &DyadicLabel::root(params.log_b())?, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_example_b4() {
        // U_0 writes entry 1, U_1 writes entry 3 (rev of 01 is 10)
        let ops = vec![
            Op::BpsUpdate { j: vec![1], v: vec![3] },
            Op::BpsQuery { j: vec![2] },
            Op::BpsUpdate { j: vec![3], v: vec![4] },
            Op::BpsQuery { j: vec![4] },
            Op::BpsUpdate { j: vec![2], v: vec![1] },
            Op::BpsQuery { j: vec![1] },
            Op::BpsUpdate { j: vec![4], v: vec![2] },
            Op::BpsQuery { j: vec![3] },
        ];
        let split = DyadicLabel::root(2).unwrap();
        let inst = map_f(&ops, &split, 5).unwrap();
        assert_eq!(inst.l, 2);
        assert_eq!(inst.x, vec![3, 2]);
        assert_eq!(inst.y, vec![vec![(0, 0)], vec![(0, 1)]]);
        assert_eq!(eval_f(&inst), vec![3, 2]);
        // query 1 in I_B: prefix 1 = 3; query 2: prefix 3 = 3 + 1 + 4 = 8
        let known = bob_known_summands(&ops, &split, 4, 5).unwrap();
        assert_eq!(known, vec![0, 1]);
        assert!(is_evenly_spreading(&inst));
    }

    #[test]
    fn concentrated_mass_is_not_spreading() {
        let inst = MultiIndexInstance { p: 11, k: 1, l: 10, x: vec![0; 10], y: vec![vec![(0, 3)]; 10] };
        assert!(!is_evenly_spreading(&inst));
        let empty = MultiIndexInstance { y: vec![vec![]; 10], ..inst };
        assert!(is_evenly_spreading(&empty));
        assert_eq!(eval_f(&empty), vec![0; 10]);
    }
}
