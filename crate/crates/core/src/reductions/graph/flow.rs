use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::{vertex, DynamicUnion, Edge, IntervalBag};
use crate::structures::Interval;
use crate::{Error, Result};

/// Capacity reported by [`FlowBackend::edges`] for uncapacitated edges.
pub const UNBOUNDED: u64 = u64::MAX;

/// Flow network over the line: vertex `i` for `0..=n`, a gadget vertex `i'`
/// per unit segment, a source and a sink. The gadget `i -> i' -> i+1`
/// carries one unit at cost -1, the bypass `i -> i+1` any amount at cost 0;
/// `s -> i` has capacity equal to the number of intervals starting at `i`
/// and `i -> t` the number ending at `i`. A min-cost flow of value `|I|`
/// uses each covered gadget exactly once, so its cost is minus the union.
///
/// Vertex numbering: `s = 0`, `i = 2i + 1`, `i' = 2i + 2`, `t = 2n + 2`.
#[derive(Debug, Clone)]
pub struct FlowBackend {
    bag: IntervalBag,
    left: Vec<u64>,
    right: Vec<u64>,
}

impl FlowBackend {
    pub fn new(n: u64) -> Result<Self> {
        let len = vertex(n)?.checked_add(1).ok_or_else(|| Error::Config("n too large".into()))?;
        vertex(2 * n + 2)?;
        Ok(Self { bag: IntervalBag::new(n), left: vec![0; len], right: vec![0; len] })
    }

    pub fn from_intervals(n: u64, intervals: &[Interval]) -> Result<Self> {
        let mut g = Self::new(n)?;
        for iv in intervals {
            g.insert(iv.a, iv.b)?;
        }
        Ok(g)
    }

    fn n(&self) -> usize {
        self.bag.universe() as usize
    }

    pub fn source(&self) -> usize {
        0
    }

    pub fn sink(&self) -> usize {
        2 * self.n() + 2
    }

    pub fn point(i: usize) -> usize {
        2 * i + 1
    }

    pub fn gadget(i: usize) -> usize {
        2 * i + 2
    }

    /// Edges with positive capacity; `weight` is the cost.
    pub fn edges(&self) -> Vec<Edge> {
        let n = self.n();
        let e = |from, to, capacity, weight| Edge { from, to, capacity, weight };
        let mut out = Vec::with_capacity(3 * n + 2 * (n + 1));
        for i in 0..n {
            out.push(e(Self::point(i), Self::gadget(i), 1, -1));
            out.push(e(Self::gadget(i), Self::point(i + 1), 1, 0));
            out.push(e(Self::point(i), Self::point(i + 1), UNBOUNDED, 0));
        }
        for i in 0..=n {
            if self.left[i] > 0 {
                out.push(e(self.source(), Self::point(i), self.left[i], 0));
            }
            if self.right[i] > 0 {
                out.push(e(Self::point(i), self.sink(), self.right[i], 0));
            }
        }
        out.sort();
        out
    }

    /// Minimum cost of a flow of value `|I|`.
    pub fn min_cost(&self) -> Result<i64> {
        let demand = self.bag.size();
        let edges: Vec<Edge> = self
            .edges()
            .into_iter()
            .map(|e| Edge { capacity: e.capacity.min(demand), ..e })
            .collect();
        let mut net = Residual::new(self.sink() + 1, &edges);
        let (flow, cost) = net.run(self.source(), self.sink(), demand)?;
        if flow != demand {
            return Err(Error::Invariant(format!("flow network admits only {flow} of {demand} units")));
        }
        Ok(cost)
    }
}

impl DynamicUnion for FlowBackend {
    fn name(&self) -> String {
        "mincost_flow".into()
    }

    fn insert(&mut self, a: u64, b: u64) -> Result<()> {
        let iv = self.bag.insert(a, b)?;
        self.left[iv.a as usize] += 1;
        self.right[iv.b as usize] += 1;
        Ok(())
    }

    fn delete(&mut self, a: u64, b: u64) -> Result<()> {
        let iv = self.bag.delete(a, b)?;
        self.left[iv.a as usize] -= 1;
        self.right[iv.b as usize] -= 1;
        Ok(())
    }

    fn query(&mut self) -> Result<u64> {
        let cost = self.min_cost()?;
        u64::try_from(-cost).map_err(|_| Error::Invariant(format!("positive min cost {cost}")))
    }
}

#[derive(Debug, Clone, Copy)]
struct Arc {
    to: usize,
    rev: usize,
    cap: u64,
    cost: i64,
}

/// Successive shortest paths with Johnson potentials.
struct Residual {
    adj: Vec<Vec<Arc>>,
}

impl Residual {
    fn new(v: usize, edges: &[Edge]) -> Self {
        let mut adj: Vec<Vec<Arc>> = vec![Vec::new(); v];
        for e in edges {
            let (fi, ti) = (adj[e.from].len(), adj[e.to].len() + usize::from(e.from == e.to));
            adj[e.from].push(Arc { to: e.to, rev: ti, cap: e.capacity, cost: e.weight });
            adj[e.to].push(Arc { to: e.from, rev: fi, cap: 0, cost: -e.weight });
        }
        Self { adj }
    }

    /// Initial potentials: every edge goes from a lower to a higher vertex
    /// number, so one pass in index order gives exact distances.
    fn dag_potentials(&self, s: usize) -> Result<Vec<i64>> {
        let v = self.adj.len();
        let mut pot = vec![i64::MAX; v];
        pot[s] = 0;
        for u in 0..v {
            if pot[u] == i64::MAX {
                continue;
            }
            for a in self.adj[u].iter().filter(|a| a.cap > 0) {
                if a.to <= u {
                    return Err(Error::Invariant("flow network is not topologically numbered".into()));
                }
                pot[a.to] = pot[a.to].min(pot[u] + a.cost);
            }
        }
        for p in pot.iter_mut().filter(|p| **p == i64::MAX) {
            *p = 0;
        }
        Ok(pot)
    }

    fn run(&mut self, s: usize, t: usize, demand: u64) -> Result<(u64, i64)> {
        let v = self.adj.len();
        let mut pot = self.dag_potentials(s)?;
        let (mut flow, mut cost) = (0u64, 0i64);
        while flow < demand {
            let mut dist = vec![i64::MAX; v];
            let mut prev: Vec<Option<(usize, usize)>> = vec![None; v];
            let mut heap = BinaryHeap::new();
            dist[s] = 0;
            heap.push(Reverse((0i64, s)));
            while let Some(Reverse((d, u))) = heap.pop() {
                if d > dist[u] {
                    continue;
                }
                for (k, a) in self.adj[u].iter().enumerate() {
                    if a.cap == 0 {
                        continue;
                    }
                    let nd = d + a.cost + pot[u] - pot[a.to];
                    if nd < dist[a.to] {
                        dist[a.to] = nd;
                        prev[a.to] = Some((u, k));
                        heap.push(Reverse((nd, a.to)));
                    }
                }
            }
            if dist[t] == i64::MAX {
                break;
            }
            for (p, d) in pot.iter_mut().zip(&dist) {
                if *d != i64::MAX {
                    *p += d;
                }
            }
            let mut push = demand - flow;
            let mut x = t;
            while let Some((u, k)) = prev[x] {
                push = push.min(self.adj[u][k].cap);
                x = u;
            }
            let mut x = t;
            while let Some((u, k)) = prev[x] {
                let a = self.adj[u][k];
                self.adj[u][k].cap -= push;
                self.adj[x][a.rev].cap += push;
                cost += a.cost * push as i64;
                x = u;
            }
            flow += push;
        }
        Ok((flow, cost))
    }
}
