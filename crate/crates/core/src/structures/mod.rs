//! The maintained objects: dynamic interval union (two backends), partial
//! sums and batch partial sums over a prime field.
//!
//! All of them are stateless descriptions (sizes, layout, base address) that
//! operate on a [`CellProbe`] handed in per call.

mod bank;
mod interval;
mod naive;
mod segment_tree;

pub use bank::{FpSequenceBank, PartialSum};
pub use interval::{Interval, IntervalUnion, MultiplicityLedger};
pub(crate) use interval::check_address_space;
pub use naive::NaiveBitmap;
pub use segment_tree::{NodeLayout, ProbeBounds, SegmentTree};

use crate::probe::{CellMemory, CellProbe};
use crate::trace::{Answer, Op};
use crate::{Error, Result};

/// Anything that can execute trace operations against cell memory.
pub trait Structure {
    fn name(&self) -> String;

    /// Executes one operation, returning the answer for queries.
    fn apply(&self, mem: &mut dyn CellProbe, op: &Op) -> Result<Option<u64>>;
}

impl<S: Structure + ?Sized> Structure for &S {
    fn name(&self) -> String {
        (**self).name()
    }

    fn apply(&self, mem: &mut dyn CellProbe, op: &Op) -> Result<Option<u64>> {
        (**self).apply(mem, op)
    }
}

impl<S: Structure + ?Sized> Structure for Box<S> {
    fn name(&self) -> String {
        (**self).name()
    }

    fn apply(&self, mem: &mut dyn CellProbe, op: &Op) -> Result<Option<u64>> {
        (**self).apply(mem, op)
    }
}

pub(crate) fn unsupported(structure: &str, op: &Op) -> Error {
    Error::Shape(format!("{structure} does not support '{}' operations", op.kind()))
}

/// Per-query answers of a run, tagged with the op index that produced them.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunAnswers {
    pub op_indices: Vec<usize>,
    pub values: Vec<u64>,
}

impl RunAnswers {
    pub fn to_answers(&self) -> Vec<Answer> {
        self.values
            .iter()
            .enumerate()
            .map(|(query_index, &answer)| Answer { query_index, answer })
            .collect()
    }
}

/// Runs `ops[range]` with op indices taken from their trace positions.
pub fn run_ops(
    structure: &dyn Structure,
    mem: &mut CellMemory,
    ops: &[Op],
    range: std::ops::Range<usize>,
) -> Result<RunAnswers> {
    let mut out = RunAnswers::default();
    for t in range {
        mem.begin_op(t)?;
        if let Some(v) = structure.apply(mem, &ops[t])? {
            out.op_indices.push(t);
            out.values.push(v);
        }
    }
    Ok(out)
}

/// Runs the whole trace on a fresh memory of word size `w`.
pub fn run_trace(structure: &dyn Structure, ops: &[Op], w: u32) -> Result<(RunAnswers, CellMemory)> {
    let mut mem = CellMemory::new(w)?;
    let answers = run_ops(structure, &mut mem, ops, 0..ops.len())?;
    Ok((answers, mem))
}
