//! Operation traces and their JSONL encoding.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// One operation of any of the maintained problems.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Op {
    Insert { a: u64, b: u64 },
    Delete { a: u64, b: u64 },
    Query,
    BpsUpdate { j: Vec<u64>, v: Vec<u64> },
    BpsQuery { j: Vec<u64> },
    PsUpdate { i: u64, v: u64 },
    PsQuery { l: u64 },
}

impl Op {
    pub fn is_query(&self) -> bool {
        matches!(self, Op::Query | Op::BpsQuery { .. } | Op::PsQuery { .. })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Op::Insert { .. } => "insert",
            Op::Delete { .. } => "delete",
            Op::Query => "query",
            Op::BpsUpdate { .. } => "bps_update",
            Op::BpsQuery { .. } => "bps_query",
            Op::PsUpdate { .. } => "ps_update",
            Op::PsQuery { .. } => "ps_query",
        }
    }

    pub fn family(&self) -> TraceKind {
        match self {
            Op::Insert { .. } | Op::Delete { .. } | Op::Query => TraceKind::IntervalUnion,
            Op::BpsUpdate { .. } | Op::BpsQuery { .. } => TraceKind::BatchPartialSum,
            Op::PsUpdate { .. } | Op::PsQuery { .. } => TraceKind::PartialSum,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TraceKind {
    IntervalUnion,
    BatchPartialSum,
    PartialSum,
}

/// The answer to the `query_index`-th query of a trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Answer {
    pub query_index: usize,
    pub answer: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OperationSequence {
    pub ops: Vec<Op>,
}

impl OperationSequence {
    pub fn new(ops: Vec<Op>) -> Self {
        Self { ops }
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// The single problem family of the trace; mixed traces are rejected.
    pub fn kind(&self) -> Result<Option<TraceKind>> {
        let mut kinds = self.ops.iter().map(Op::family);
        let Some(first) = kinds.next() else {
            return Ok(None);
        };
        if let Some((i, other)) = kinds.enumerate().find(|(_, k)| *k != first) {
            return Err(Error::Shape(format!(
                "operation {} is {other:?} but the trace started as {first:?}",
                i + 1
            )));
        }
        Ok(Some(first))
    }

    pub fn num_queries(&self) -> usize {
        self.ops.iter().filter(|o| o.is_query()).count()
    }

    pub fn read_jsonl<R: BufRead>(input: R) -> Result<Self> {
        let mut ops = Vec::new();
        for (i, line) in input.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let op = serde_json::from_str(&line).map_err(|e| Error::Parse {
                line: i + 1,
                msg: e.to_string(),
            })?;
            ops.push(op);
        }
        Ok(Self { ops })
    }

    pub fn write_jsonl<W: Write>(&self, mut out: W) -> Result<()> {
        for op in &self.ops {
            serde_json::to_writer(&mut out, op).map_err(std::io::Error::from)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

pub fn write_answers<W: Write>(answers: &[Answer], mut out: W) -> Result<()> {
    for a in answers {
        serde_json::to_writer(&mut out, a).map_err(std::io::Error::from)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_answers<R: BufRead>(input: R) -> Result<Vec<Answer>> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: i + 1,
            msg: e.to_string(),
        })?);
    }
    Ok(out)
}
