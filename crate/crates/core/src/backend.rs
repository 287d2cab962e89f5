//! Named backends and a uniform way to run a trace on one.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::probe::{CellMemory, ProbeLog};
use crate::reductions::{BpsViaDiu, DynamicUnion, FlowBackend, PsViaDiu, SccBackend, ShortestPathBackend};
use crate::structures::{run_ops, FpSequenceBank, NaiveBitmap, PartialSum, SegmentTree, Structure};
use crate::trace::{Op, OperationSequence, TraceKind};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendKind {
    SegmentTree,
    NaiveBitmap,
    Bank,
    Scc,
    ShortestPath,
    MincostFlow,
}

impl BackendKind {
    pub const ALL: [BackendKind; 6] = [
        BackendKind::SegmentTree,
        BackendKind::NaiveBitmap,
        BackendKind::Bank,
        BackendKind::Scc,
        BackendKind::ShortestPath,
        BackendKind::MincostFlow,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BackendKind::SegmentTree => "segment_tree",
            BackendKind::NaiveBitmap => "naive_bitmap",
            BackendKind::Bank => "bank",
            BackendKind::Scc => "scc",
            BackendKind::ShortestPath => "shortest_path",
            BackendKind::MincostFlow => "mincost_flow",
        }
    }

    /// Whether the backend keeps its state in probed cells.
    pub fn is_cell_probe(self) -> bool {
        matches!(self, BackendKind::SegmentTree | BackendKind::NaiveBitmap | BackendKind::Bank)
    }
}

impl fmt::Display for BackendKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BackendKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown backend {s:?}")))
    }
}

/// Sizes a trace does not carry by itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TraceParams {
    /// Universe `[0, n]` of an interval trace, or `n` of a partial-sum trace.
    pub n: Option<u64>,
    /// Sequence length of a batch trace.
    pub b: Option<u64>,
    pub p: Option<u64>,
    pub w: u32,
}

impl TraceParams {
    pub fn new(w: u32) -> Self {
        Self { w, ..Self::default() }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub backend: String,
    pub answers: Vec<u64>,
    /// Present for cell-probe backends.
    pub log: Option<ProbeLog>,
}

fn need(v: Option<u64>, what: &str, kind: TraceKind) -> Result<u64> {
    v.ok_or_else(|| Error::Config(format!("{what} is required for {kind:?} traces")))
}

fn interval_extent(ops: &[Op]) -> u64 {
    ops.iter()
        .filter_map(|op| match *op {
            Op::Insert { b, .. } | Op::Delete { b, .. } => Some(b),
            _ => None,
        })
        .max()
        .unwrap_or(0)
        .max(1)
}

/// Builds the cell-probe structure for `kind` on a trace of family `family`.
pub fn build_structure(kind: BackendKind, family: TraceKind, ops: &[Op], params: &TraceParams) -> Result<Box<dyn Structure>> {
    let w = params.w;
    let width = match ops.iter().find(|op| !matches!(op, Op::Query)) {
        Some(Op::BpsUpdate { j, .. }) | Some(Op::BpsQuery { j }) => j.len(),
        _ => 0,
    };
    Ok(match (family, kind) {
        (TraceKind::IntervalUnion, BackendKind::SegmentTree) => {
            Box::new(SegmentTree::new(params.n.unwrap_or_else(|| interval_extent(ops)), w, 0)?)
        }
        (TraceKind::IntervalUnion, BackendKind::NaiveBitmap) => {
            Box::new(NaiveBitmap::new(params.n.unwrap_or_else(|| interval_extent(ops)), w, 0)?)
        }
        (TraceKind::BatchPartialSum, BackendKind::Bank) => Box::new(FpSequenceBank::new(
            width,
            need(params.b, "B", family)?,
            need(params.p, "p", family)?,
            w,
            0,
        )?),
        (TraceKind::BatchPartialSum, BackendKind::SegmentTree) => Box::new(BpsViaDiu::new(
            width,
            need(params.b, "B", family)?,
            need(params.p, "p", family)?,
            w,
            SegmentTree::new,
        )?),
        (TraceKind::BatchPartialSum, BackendKind::NaiveBitmap) => Box::new(BpsViaDiu::new(
            width,
            need(params.b, "B", family)?,
            need(params.p, "p", family)?,
            w,
            NaiveBitmap::new,
        )?),
        (TraceKind::PartialSum, BackendKind::Bank) => {
            let n = need(params.n, "n", family)?;
            let root = n.isqrt();
            if root * root != n {
                return Err(Error::Config(format!("n = {n} is not a perfect square")));
            }
            let p = params.p.unwrap_or_else(|| crate::field::next_prime(n + 1));
            Box::new(PartialSum::new(root, p, w, 0)?)
        }
        (TraceKind::PartialSum, BackendKind::SegmentTree) => {
            Box::new(PsViaDiu::with_segment_tree(need(params.n, "n", family)?, w)?)
        }
        (TraceKind::PartialSum, BackendKind::NaiveBitmap) => Box::new(PsViaDiu::new(
            need(params.n, "n", family)?,
            w,
            NaiveBitmap::new,
        )?),
        (family, kind) => {
            return Err(Error::Config(format!("backend {kind} cannot run {family:?} traces")))
        }
    })
}

/// Builds a graph backend for an interval trace.
pub fn build_graph_backend(kind: BackendKind, n: u64) -> Result<Box<dyn DynamicUnion>> {
    Ok(match kind {
        BackendKind::Scc => Box::new(SccBackend::new(n)?),
        BackendKind::ShortestPath => Box::new(ShortestPathBackend::new(n)?),
        BackendKind::MincostFlow => Box::new(FlowBackend::new(n)?),
        other => return Err(Error::Config(format!("{other} is not a graph backend"))),
    })
}

/// Runs `trace` on backend `kind` and returns the query answers in order.
pub fn run_backend(kind: BackendKind, trace: &OperationSequence, params: &TraceParams) -> Result<RunOutput> {
    let Some(family) = trace.kind()? else {
        return Ok(RunOutput {
            backend: kind.to_string(),
            answers: Vec::new(),
            log: kind.is_cell_probe().then(ProbeLog::new),
        });
    };
    if kind.is_cell_probe() {
        let ds = build_structure(kind, family, &trace.ops, params)?;
        let mut mem = CellMemory::new(params.w)?;
        let run = run_ops(ds.as_ref(), &mut mem, &trace.ops, 0..trace.ops.len())?;
        return Ok(RunOutput { backend: ds.name(), answers: run.values, log: Some(mem.take_log()) });
    }
    if family != TraceKind::IntervalUnion {
        return Err(Error::Config(format!("backend {kind} only runs interval-union traces")));
    }
    let mut g = build_graph_backend(kind, params.n.unwrap_or_else(|| interval_extent(&trace.ops)))?;
    let mut answers = Vec::new();
    for op in &trace.ops {
        match *op {
            Op::Insert { a, b } => g.insert(a, b)?,
            Op::Delete { a, b } => g.delete(a, b)?,
            Op::Query => answers.push(g.query()?),
            _ => unreachable!("trace family checked above"),
        }
    }
    Ok(RunOutput { backend: g.name(), answers, log: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_roundtrip() {
        for k in BackendKind::ALL {
            assert_eq!(k.as_str().parse::<BackendKind>().unwrap(), k);
        }
        assert!("heap".parse::<BackendKind>().is_err());
    }

    #[test]
    fn all_interval_backends_agree() {
        let trace = OperationSequence::new(vec![
            Op::Insert { a: 0, b: 3 },
            Op::Insert { a: 2, b: 6 },
            Op::Query,
            Op::Delete { a: 0, b: 3 },
            Op::Query,
        ]);
        let params = TraceParams { n: Some(8), ..TraceParams::new(64) };
        for k in BackendKind::ALL.into_iter().filter(|&k| k != BackendKind::Bank) {
            let out = run_backend(k, &trace, &params).unwrap();
            assert_eq!(out.answers, vec![6, 4], "{k}");
            assert_eq!(out.log.is_some(), k.is_cell_probe());
        }
        assert!(run_backend(BackendKind::Bank, &trace, &params).is_err());
    }
}
