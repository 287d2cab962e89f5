use std::collections::VecDeque;

use super::{vertex, DynamicUnion, Edge, IntervalBag};
use crate::structures::Interval;
use crate::{Error, Result};

/// Vertices `0..=n` plus `s = n+1`, `t = n+2`; `i -> i+1` has weight 1,
/// `i+1 -> i` weight 0, `s -> 0` and `n -> t` weight 0, and interval `[a, b]`
/// adds `a -> b` of weight 0. The distance from `s` to `t` is the uncovered
/// length, so the union length is `n - dist(s, t)`.
#[derive(Debug, Clone)]
pub struct ShortestPathBackend {
    bag: IntervalBag,
}

impl ShortestPathBackend {
    pub fn new(n: u64) -> Result<Self> {
        vertex(n + 2)?;
        Ok(Self { bag: IntervalBag::new(n) })
    }

    pub fn from_intervals(n: u64, intervals: &[Interval]) -> Result<Self> {
        let mut g = Self::new(n)?;
        for iv in intervals {
            g.bag.insert(iv.a, iv.b)?;
        }
        Ok(g)
    }

    pub fn source(&self) -> usize {
        self.bag.universe() as usize + 1
    }

    pub fn sink(&self) -> usize {
        self.bag.universe() as usize + 2
    }

    pub fn edges(&self) -> Vec<Edge> {
        let n = self.bag.universe() as usize;
        let e = |from, to, weight| Edge { from, to, capacity: 1, weight };
        let mut out = Vec::with_capacity(2 * n + 2);
        out.push(e(self.source(), 0, 0));
        out.push(e(n, self.sink(), 0));
        for i in 0..n {
            out.push(e(i, i + 1, 1));
            out.push(e(i + 1, i, 0));
        }
        for (iv, c) in self.bag.iter() {
            for _ in 0..c {
                out.push(e(iv.a as usize, iv.b as usize, 0));
            }
        }
        out.sort();
        out
    }

    /// `dist(s, t)` by 0-1 BFS.
    pub fn distance(&self) -> Result<u64> {
        let v = self.bag.universe() as usize + 3;
        let mut adj: Vec<Vec<(usize, u64)>> = vec![Vec::new(); v];
        for e in self.edges() {
            adj[e.from].push((e.to, e.weight as u64));
        }
        let mut dist = vec![u64::MAX; v];
        let mut dq = VecDeque::new();
        dist[self.source()] = 0;
        dq.push_back(self.source());
        while let Some(u) = dq.pop_front() {
            for &(w, c) in &adj[u] {
                let d = dist[u] + c;
                if d < dist[w] {
                    dist[w] = d;
                    if c == 0 {
                        dq.push_front(w);
                    } else {
                        dq.push_back(w);
                    }
                }
            }
        }
        match dist[self.sink()] {
            u64::MAX => Err(Error::Invariant("sink unreachable".into())),
            d => Ok(d),
        }
    }
}

impl DynamicUnion for ShortestPathBackend {
    fn name(&self) -> String {
        "shortest_path".into()
    }

    fn insert(&mut self, a: u64, b: u64) -> Result<()> {
        self.bag.insert(a, b).map(|_| ())
    }

    fn delete(&mut self, a: u64, b: u64) -> Result<()> {
        self.bag.delete(a, b).map(|_| ())
    }

    fn query(&mut self) -> Result<u64> {
        let d = self.distance()?;
        self.bag
            .universe()
            .checked_sub(d)
            .ok_or_else(|| Error::Invariant(format!("distance {d} exceeds n")))
    }
}
