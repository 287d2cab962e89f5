//! Seeded random workloads: legal interval traces, partial-sum traces and rectangles.

use rand::Rng;

use crate::klee::Rect;
use crate::trace::Op;

/// A legal interval-union trace over `[0, n]`: inserts of random intervals,
/// deletes of random live ones and queries, roughly in ratio 2:1:1.
pub fn random_interval_ops<R: Rng + ?Sized>(n: u64, len: usize, rng: &mut R) -> Vec<Op> {
    let mut live: Vec<(u64, u64)> = Vec::new();
    let mut ops = Vec::with_capacity(len);
    while ops.len() < len {
        let roll = rng.random_range(0..4u8);
        if roll == 0 {
            ops.push(Op::Query);
        } else if roll == 1 && !live.is_empty() {
            let (a, b) = live.swap_remove(rng.random_range(0..live.len()));
            ops.push(Op::Delete { a, b });
        } else {
            let x = rng.random_range(0..=n);
            let y = rng.random_range(0..=n);
            let (a, b) = (x.min(y), x.max(y));
            live.push((a, b));
            ops.push(Op::Insert { a, b });
        }
    }
    ops
}

/// A partial-sum trace over `r = sqrt(n)` entries with values in `[0, r]`.
pub fn random_ps_ops<R: Rng + ?Sized>(r: u64, len: usize, rng: &mut R) -> Vec<Op> {
    (0..len)
        .map(|_| {
            if rng.random_bool(0.5) {
                Op::PsUpdate { i: rng.random_range(1..=r), v: rng.random_range(0..=r) }
            } else {
                Op::PsQuery { l: rng.random_range(1..=r) }
            }
        })
        .collect()
}

/// `count` rectangles with coordinates in `[0, max_coord]`.
pub fn random_rects<R: Rng + ?Sized>(count: usize, max_coord: u64, rng: &mut R) -> Vec<Rect> {
    (0..count)
        .map(|_| {
            let (x1, x2) = ordered(rng, max_coord);
            let (y1, y2) = ordered(rng, max_coord);
            Rect { x1, x2, y1, y2 }
        })
        .collect()
}

fn ordered<R: Rng + ?Sized>(rng: &mut R, max: u64) -> (u64, u64) {
    let a = rng.random_range(0..=max);
    let b = rng.random_range(0..=max);
    (a.min(b), a.max(b))
}
