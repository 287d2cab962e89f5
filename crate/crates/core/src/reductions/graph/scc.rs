use super::{vertex, DynamicUnion, Edge, IntervalBag};
use crate::structures::Interval;
use crate::Result;

/// Vertices `0..=n` with the path `i -> i+1`; interval `[a, b]` adds the back
/// edge `b -> a`. Covered unit segments merge consecutive vertices into one
/// component, so the union length is `(n + 1) - #SCC`.
#[derive(Debug, Clone)]
pub struct SccBackend {
    bag: IntervalBag,
}

impl SccBackend {
    pub fn new(n: u64) -> Result<Self> {
        vertex(n)?;
        Ok(Self { bag: IntervalBag::new(n) })
    }

    pub fn from_intervals(n: u64, intervals: &[Interval]) -> Result<Self> {
        let mut g = Self::new(n)?;
        for iv in intervals {
            g.bag.insert(iv.a, iv.b)?;
        }
        Ok(g)
    }

    /// The maintained graph, with parallel edges listed once per copy.
    pub fn edges(&self) -> Vec<Edge> {
        let n = self.bag.universe() as usize;
        let mut out: Vec<Edge> =
            (0..n).map(|i| Edge { from: i, to: i + 1, capacity: 1, weight: 1 }).collect();
        for (iv, c) in self.bag.iter() {
            for _ in 0..c {
                out.push(Edge { from: iv.b as usize, to: iv.a as usize, capacity: 1, weight: 1 });
            }
        }
        out.sort();
        out
    }

    pub fn scc_count(&self) -> usize {
        let v = self.bag.universe() as usize + 1;
        let mut adj = vec![Vec::new(); v];
        for e in self.edges() {
            adj[e.from].push(e.to);
        }
        tarjan_count(&adj)
    }
}

/// Number of strongly connected components, iterative Tarjan.
pub(crate) fn tarjan_count(adj: &[Vec<usize>]) -> usize {
    const UNSEEN: usize = usize::MAX;
    let v = adj.len();
    let mut index = vec![UNSEEN; v];
    let mut low = vec![0usize; v];
    let mut on_stack = vec![false; v];
    let mut stack = Vec::new();
    let mut next = 0usize;
    let mut count = 0usize;
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..v {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (u, ref mut pos)) = call.last_mut() {
            if *pos < adj[u].len() {
                let w = adj[u][*pos];
                *pos += 1;
                if index[w] == UNSEEN {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[u] = low[u].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[u]);
                }
                if low[u] == index[u] {
                    count += 1;
                    while let Some(x) = stack.pop() {
                        on_stack[x] = false;
                        if x == u {
                            break;
                        }
                    }
                }
            }
        }
    }
    count
}

impl DynamicUnion for SccBackend {
    fn name(&self) -> String {
        "scc".into()
    }

    fn insert(&mut self, a: u64, b: u64) -> Result<()> {
        self.bag.insert(a, b).map(|_| ())
    }

    fn delete(&mut self, a: u64, b: u64) -> Result<()> {
        self.bag.delete(a, b).map(|_| ())
    }

    fn query(&mut self) -> Result<u64> {
        Ok(self.bag.universe() + 1 - self.scc_count() as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n3_single_interval() {
        let mut g = SccBackend::new(3).unwrap();
        g.insert(0, 2).unwrap();
        assert_eq!(g.scc_count(), 2);
        assert_eq!(g.query().unwrap(), 2);
        g.delete(0, 2).unwrap();
        assert_eq!(g.query().unwrap(), 0);
        assert!(g.delete(0, 2).is_err());
    }

    #[test]
    fn tarjan_on_cycles() {
        let adj = vec![vec![1], vec![2], vec![0, 3], vec![4], vec![3]];
        assert_eq!(tarjan_count(&adj), 2);
        assert_eq!(tarjan_count(&[vec![], vec![], vec![]]), 3);
    }

    #[test]
    fn long_path_does_not_overflow_stack() {
        let mut g = SccBackend::new(200_000).unwrap();
        g.insert(0, 200_000).unwrap();
        assert_eq!(g.query().unwrap(), 200_000);
    }
}
