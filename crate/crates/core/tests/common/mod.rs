#![allow(dead_code)]

use diu_core::trace::Op;

/// Cover count per unit segment plus the number of covered segments.
pub struct CoverOracle {
    counts: Vec<u32>,
    covered: u64,
}

impl CoverOracle {
    pub fn new(n: u64) -> Self {
        Self { counts: vec![0; n as usize], covered: 0 }
    }

    pub fn insert(&mut self, a: u64, b: u64) {
        for c in &mut self.counts[a as usize..b as usize] {
            if *c == 0 {
                self.covered += 1;
            }
            *c += 1;
        }
    }

    pub fn delete(&mut self, a: u64, b: u64) {
        for c in &mut self.counts[a as usize..b as usize] {
            *c -= 1;
            if *c == 0 {
                self.covered -= 1;
            }
        }
    }

    pub fn query(&self) -> u64 {
        self.covered
    }
}

/// Union lengths answered along an interval trace.
pub fn interval_answers(n: u64, ops: &[Op]) -> Vec<u64> {
    let mut o = CoverOracle::new(n);
    let mut out = Vec::new();
    for op in ops {
        match *op {
            Op::Insert { a, b } => o.insert(a, b),
            Op::Delete { a, b } => o.delete(a, b),
            Op::Query => out.push(o.query()),
            _ => panic!("not an interval op"),
        }
    }
    out
}

/// Batch partial sums by direct summation over a plain table.
pub fn bps_answers(k: usize, b: u64, p: u64, ops: &[Op]) -> Vec<u64> {
    let mut table = vec![vec![0u64; b as usize]; k];
    let mut out = Vec::new();
    for op in ops {
        match op {
            Op::BpsUpdate { j, v } => {
                for i in 0..k {
                    table[i][j[i] as usize - 1] = v[i];
                }
            }
            Op::BpsQuery { j } => {
                let mut s: u128 = 0;
                for i in 0..k {
                    s += table[i][..j[i] as usize].iter().map(|&x| x as u128).sum::<u128>();
                }
                out.push((s % p as u128) as u64);
            }
            _ => panic!("not a batch op"),
        }
    }
    out
}

/// Plain partial sums over `r` entries.
pub fn ps_answers(r: u64, ops: &[Op]) -> Vec<u64> {
    let mut a = vec![0u64; r as usize];
    let mut out = Vec::new();
    for op in ops {
        match *op {
            Op::PsUpdate { i, v } => a[i as usize - 1] = v,
            Op::PsQuery { l } => out.push(a[..l as usize].iter().sum()),
            _ => panic!("not a partial-sum op"),
        }
    }
    out
}

/// True iff some set of at most `floor(0.1 * dim)` coordinates holds more
/// than `0.9 * dim` ones, by enumerating every such set.
pub fn concentrated_exhaustive(counts: &[usize]) -> bool {
    let dim = counts.len();
    let m = dim / 10;
    fn rec(counts: &[usize], start: usize, left: usize, acc: usize, limit: usize) -> bool {
        if 10 * acc > limit {
            return true;
        }
        if left == 0 {
            return false;
        }
        (start..counts.len()).any(|i| rec(counts, i + 1, left - 1, acc + counts[i], limit))
    }
    rec(counts, 0, m, 0, 9 * dim)
}

/// Area by painting a boolean grid.
pub fn grid_area(rects: &[diu_core::klee::Rect], side: usize) -> u64 {
    let mut g = vec![vec![false; side]; side];
    for r in rects {
        for row in g.iter_mut().take(r.x2 as usize).skip(r.x1 as usize) {
            for cell in row.iter_mut().take(r.y2 as usize).skip(r.y1 as usize) {
                *cell = true;
            }
        }
    }
    g.iter().flatten().filter(|&&c| c).count() as u64
}
