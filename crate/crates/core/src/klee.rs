//! Area of a union of axis-parallel rectangles by sweeping a vertical line
//! over an interval-union structure.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::probe::CellMemory;
use crate::structures::{IntervalUnion, SegmentTree};
use crate::{Error, Result};

/// `[x1, x2] x [y1, y2]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rect {
    pub x1: u64,
    pub x2: u64,
    pub y1: u64,
    pub y2: u64,
}

impl Rect {
    pub fn new(x1: u64, x2: u64, y1: u64, y2: u64) -> Result<Self> {
        if x1 > x2 || y1 > y2 {
            return Err(Error::Range(format!("rectangle [{x1}, {x2}] x [{y1}, {y2}] has a reversed side")));
        }
        Ok(Self { x1, x2, y1, y2 })
    }

    pub fn area(&self) -> u128 {
        u128::from(self.x2 - self.x1) * u128::from(self.y2 - self.y1)
    }

    fn check_within(&self, n: u64) -> Result<()> {
        Rect::new(self.x1, self.x2, self.y1, self.y2)?;
        if self.x2 > n || self.y2 > n {
            return Err(Error::Range(format!(
                "rectangle [{}, {}] x [{}, {}] leaves [0, {n}]",
                self.x1, self.x2, self.y1, self.y2
            )));
        }
        Ok(())
    }
}

/// Largest coordinate, the smallest `n` the rectangles fit in.
pub fn extent(rects: &[Rect]) -> u64 {
    rects.iter().map(|r| r.x2.max(r.y2)).max().unwrap_or(0)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KleeReport {
    pub area: u128,
    pub inserts: usize,
    pub deletes: usize,
    pub queries: usize,
    pub insert_probes: usize,
    pub delete_probes: usize,
    pub query_probes: usize,
    pub total_probes: usize,
}

/// Sweeps `rects` with `ds`, numbering backend operations from the memory's
/// current op index so probes stay attributable.
pub fn klee_area<I: IntervalUnion + ?Sized>(rects: &[Rect], ds: &I, mem: &mut CellMemory) -> Result<KleeReport> {
    let n = ds.universe();
    for r in rects {
        r.check_within(n)?;
    }
    let mut events: Vec<(u64, bool, u64, u64)> = Vec::with_capacity(2 * rects.len());
    for r in rects {
        events.push((r.x1, true, r.y1, r.y2));
        events.push((r.x2, false, r.y1, r.y2));
    }
    // within one x, insertions first so a zero-width rectangle never deletes before it exists
    events.sort_unstable_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));

    let start_probes = mem.log().len();
    let mut report = KleeReport::default();
    let mut op = mem.op_index();
    let mut i = 0;
    while i < events.len() {
        let x = events[i].0;
        while i < events.len() && events[i].0 == x {
            let (_, insert, a, b) = events[i];
            mem.begin_op(op)?;
            let before = mem.log().len();
            if insert {
                ds.insert(mem, a, b)?;
                report.inserts += 1;
                report.insert_probes += mem.log().len() - before;
            } else {
                ds.delete(mem, a, b)?;
                report.deletes += 1;
                report.delete_probes += mem.log().len() - before;
            }
            op += 1;
            i += 1;
        }
        mem.begin_op(op)?;
        let before = mem.log().len();
        let len = ds.query(mem)?;
        report.queries += 1;
        report.query_probes += mem.log().len() - before;
        op += 1;
        if let Some(&(next, ..)) = events.get(i) {
            report.area += u128::from(len) * u128::from(next - x);
        } else if len != 0 {
            return Err(Error::Invariant(format!("union length {len} after the last event")));
        }
    }
    report.total_probes = mem.log().len() - start_probes;
    Ok(report)
}

/// Klee's measure with a segment tree over `[0, n]` on a fresh 64-bit memory.
pub fn klee_area_segment_tree(rects: &[Rect], n: u64) -> Result<KleeReport> {
    let ds = SegmentTree::new(n.max(1), 64, 0)?;
    let mut mem = CellMemory::with_default_word_size();
    klee_area(rects, &ds, &mut mem)
}

pub const ORACLE_CAP: u64 = 1024;

/// Area by painting unit cells; every coordinate must be at most `cap`.
pub fn klee_oracle(rects: &[Rect], cap: u64) -> Result<u64> {
    if cap > 1 << 14 {
        return Err(Error::Config(format!("oracle cap {cap} exceeds 16384")));
    }
    if let Some(r) = rects.iter().find(|r| r.x2 > cap || r.y2 > cap || r.x1 > r.x2 || r.y1 > r.y2) {
        return Err(Error::Config(format!("rectangle {r:?} is outside the oracle's [0, {cap}] grid")));
    }
    let side = cap as usize;
    let mut grid = vec![false; side * side];
    for r in rects {
        for x in r.x1 as usize..r.x2 as usize {
            grid[x * side + r.y1 as usize..x * side + r.y2 as usize].fill(true);
        }
    }
    Ok(grid.iter().filter(|&&c| c).count() as u64)
}

/// Rectangles as CSV rows `x1,x2,y1,y2`; a leading header row is skipped.
pub fn read_rects_csv<R: Read>(input: R) -> Result<Vec<Rect>> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(input);
    let mut out = Vec::new();
    for (i, row) in reader.records().enumerate() {
        let line = i + 1;
        let row = row.map_err(|e| Error::Parse { line, msg: e.to_string() })?;
        if line == 1 && row.get(0).is_some_and(|f| f.parse::<u64>().is_err()) {
            continue;
        }
        if row.len() != 4 {
            return Err(Error::Parse { line, msg: format!("expected 4 fields, found {}", row.len()) });
        }
        let mut v = [0u64; 4];
        for (slot, field) in v.iter_mut().zip(row.iter()) {
            *slot = field
                .parse()
                .map_err(|_| Error::Parse { line, msg: format!("{field:?} is not a nonnegative integer") })?;
        }
        out.push(Rect::new(v[0], v[1], v[2], v[3]).map_err(|e| Error::Parse { line, msg: e.to_string() })?);
    }
    Ok(out)
}

pub fn write_rects_csv<W: Write>(rects: &[Rect], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x1", "x2", "y1", "y2"]).map_err(std::io::Error::from)?;
    for r in rects {
        w.serialize((r.x1, r.x2, r.y1, r.y2)).map_err(std::io::Error::from)?;
    }
    w.flush()?;
    Ok(())
}
