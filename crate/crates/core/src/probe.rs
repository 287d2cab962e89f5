//! Cell-probe memory.
//!
//! Every data structure in this crate keeps its persistent state in a
//! [`CellMemory`]: a sparse map from `w`-bit addresses to `w`-bit words where
//! unwritten cells read as zero. Each access is appended to a [`ProbeLog`]
//! tagged with the index of the operation that issued it, which is what the
//! probe counts, the epoch sets `P_I` and the communication-game replay are
//! computed from.
//!
//! Structures never own a memory. They are handed a `&mut dyn CellProbe` per
//! operation, so nothing can survive between operations outside the cells.

use std::collections::BTreeSet;
use std::io::{Read, Write};
use std::ops::Range;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Addr = u64;
pub type Word = u64;

pub const DEFAULT_WORD_SIZE: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProbeError {
    #[error("address {addr} does not fit in a {word_size}-bit address space")]
    AddressOutOfRange { addr: Addr, word_size: u32 },
    #[error("word {word} does not fit in {word_size} bits")]
    WordTooWide { word: Word, word_size: u32 },
    #[error("operation index went backwards ({current} -> {requested})")]
    OpIndexRegressed { current: usize, requested: usize },
    /// Raised by intercepting memories (the game simulator) to stop a run.
    #[error("aborted: {0}")]
    Aborted(String),
}

/// Largest value representable in `word_size` bits.
pub fn word_mask(word_size: u32) -> Word {
    if word_size >= 64 {
        Word::MAX
    } else {
        (1u64 << word_size) - 1
    }
}

/// The interface a data structure uses to touch memory.
pub trait CellProbe {
    fn word_size(&self) -> u32;
    fn read(&mut self, addr: Addr) -> Result<Word, ProbeError>;
    fn write(&mut self, addr: Addr, word: Word) -> Result<(), ProbeError>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProbeKind {
    Read,
    Write,
}

impl ProbeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ProbeKind::Read => "read",
            ProbeKind::Write => "write",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeRecord {
    pub op_index: usize,
    pub kind: ProbeKind,
    pub address: Addr,
}

/// Append-only record of every probe, in execution order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProbeLog {
    entries: Vec<ProbeRecord>,
}

impl ProbeLog {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a log from raw records; fails if op indices decrease.
    pub fn from_records(entries: Vec<ProbeRecord>) -> Result<Self, ProbeError> {
        for pair in entries.windows(2) {
            if pair[1].op_index < pair[0].op_index {
                return Err(ProbeError::OpIndexRegressed {
                    current: pair[0].op_index,
                    requested: pair[1].op_index,
                });
            }
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[ProbeRecord] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    fn push(&mut self, record: ProbeRecord) {
        self.entries.push(record);
    }

    /// Entries whose op index lies in `ops`.
    pub fn slice(&self, ops: Range<usize>) -> &[ProbeRecord] {
        let lo = self.entries.partition_point(|e| e.op_index < ops.start);
        let hi = self.entries.partition_point(|e| e.op_index < ops.end);
        &self.entries[lo..hi.max(lo)]
    }

    /// Number of probes issued by operation `op_index`.
    pub fn probes_in(&self, op_index: usize) -> usize {
        self.slice(op_index..op_index + 1).len()
    }

    /// Probe counts for operations `0..num_ops`.
    pub fn per_op_counts(&self, num_ops: usize) -> Vec<usize> {
        let mut counts = vec![0; num_ops];
        for e in &self.entries {
            if e.op_index < num_ops {
                counts[e.op_index] += 1;
            }
        }
        counts
    }

    /// The set of distinct cells probed by operations in `ops` (`P_I`).
    pub fn probe_set(&self, ops: Range<usize>) -> BTreeSet<Addr> {
        self.slice(ops).iter().map(|e| e.address).collect()
    }

    /// Largest op index present, if any.
    pub fn last_op(&self) -> Option<usize> {
        self.entries.last().map(|e| e.op_index)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut wtr = csv::Writer::from_writer(out);
        wtr.write_record(["op_index", "kind", "address"])?;
        for e in &self.entries {
            wtr.write_record([
                e.op_index.to_string(),
                e.kind.as_str().to_string(),
                e.address.to_string(),
            ])?;
        }
        wtr.flush()
    }

    pub fn read_csv<R: Read>(input: R) -> crate::Result<Self> {
        let mut rdr = csv::Reader::from_reader(input);
        let mut entries = Vec::new();
        for (i, rec) in rdr.deserialize::<ProbeRecord>().enumerate() {
            let rec = rec.map_err(|e| crate::Error::Parse {
                line: i + 2,
                msg: e.to_string(),
            })?;
            entries.push(rec);
        }
        Ok(Self::from_records(entries)?)
    }
}

/// Logical copy of the cell contents at one instant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snapshot {
    word_size: u32,
    cells: FxHashMap<Addr, Word>,
}

impl Snapshot {
    pub fn word_size(&self) -> u32 {
        self.word_size
    }

    /// Reads a cell of the snapshot without probing anything.
    pub fn peek(&self, addr: Addr) -> Word {
        self.cells.get(&addr).copied().unwrap_or(0)
    }
}

/// Addressable `w`-bit cells plus the probe log.
#[derive(Debug, Clone)]
pub struct CellMemory {
    word_size: u32,
    cells: FxHashMap<Addr, Word>,
    log: ProbeLog,
    op_index: usize,
}

impl CellMemory {
    pub fn new(word_size: u32) -> crate::Result<Self> {
        if !(1..=64).contains(&word_size) {
            return Err(crate::Error::Config(format!(
                "word size must be in 1..=64, got {word_size}"
            )));
        }
        Ok(Self {
            word_size,
            cells: FxHashMap::default(),
            log: ProbeLog::new(),
            op_index: 0,
        })
    }

    pub fn with_default_word_size() -> Self {
        Self::new(DEFAULT_WORD_SIZE).expect("64 is a valid word size")
    }

    pub fn op_index(&self) -> usize {
        self.op_index
    }

    /// Marks the start of operation `op_index`; later probes are attributed to it.
    pub fn begin_op(&mut self, op_index: usize) -> Result<(), ProbeError> {
        if op_index < self.op_index {
            return Err(ProbeError::OpIndexRegressed {
                current: self.op_index,
                requested: op_index,
            });
        }
        self.op_index = op_index;
        Ok(())
    }

    pub fn probe_read(&mut self, addr: Addr, op_index: usize) -> Result<Word, ProbeError> {
        self.begin_op(op_index)?;
        self.read(addr)
    }

    pub fn probe_write(
        &mut self,
        addr: Addr,
        word: Word,
        op_index: usize,
    ) -> Result<(), ProbeError> {
        self.begin_op(op_index)?;
        self.write(addr, word)
    }

    pub fn log(&self) -> &ProbeLog {
        &self.log
    }

    pub fn take_log(&mut self) -> ProbeLog {
        std::mem::take(&mut self.log)
    }

    /// Reads a cell without recording a probe. Used by simulated parties that
    /// inspect their own copy of memory outside the data structure.
    pub fn peek(&self, addr: Addr) -> Word {
        self.cells.get(&addr).copied().unwrap_or(0)
    }

    /// Overwrites a cell without recording a probe.
    pub fn poke(&mut self, addr: Addr, word: Word) -> Result<(), ProbeError> {
        self.check(addr, word)?;
        self.store(addr, word);
        Ok(())
    }

    /// Number of cells holding a nonzero word.
    pub fn occupied_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn snapshot(&self) -> Snapshot {
        Snapshot {
            word_size: self.word_size,
            cells: self.cells.clone(),
        }
    }

    /// Restores the cell contents. The log and op index are left alone.
    pub fn restore(&mut self, snapshot: &Snapshot) {
        self.word_size = snapshot.word_size;
        self.cells = snapshot.cells.clone();
    }

    /// A fresh memory whose cells equal the snapshot, with an empty log
    /// starting at `op_index`.
    pub fn from_snapshot(snapshot: &Snapshot, op_index: usize) -> Self {
        Self {
            word_size: snapshot.word_size,
            cells: snapshot.cells.clone(),
            log: ProbeLog::new(),
            op_index,
        }
    }

    fn check(&self, addr: Addr, word: Word) -> Result<(), ProbeError> {
        let mask = word_mask(self.word_size);
        if addr > mask {
            return Err(ProbeError::AddressOutOfRange {
                addr,
                word_size: self.word_size,
            });
        }
        if word > mask {
            return Err(ProbeError::WordTooWide {
                word,
                word_size: self.word_size,
            });
        }
        Ok(())
    }

    fn store(&mut self, addr: Addr, word: Word) {
        // zero is the default, so the map only holds nonzero words
        if word == 0 {
            self.cells.remove(&addr);
        } else {
            self.cells.insert(addr, word);
        }
    }
}

impl CellProbe for CellMemory {
    fn word_size(&self) -> u32 {
        self.word_size
    }

    fn read(&mut self, addr: Addr) -> Result<Word, ProbeError> {
        self.check(addr, 0)?;
        self.log.push(ProbeRecord {
            op_index: self.op_index,
            kind: ProbeKind::Read,
            address: addr,
        });
        Ok(self.peek(addr))
    }

    fn write(&mut self, addr: Addr, word: Word) -> Result<(), ProbeError> {
        self.check(addr, word)?;
        self.log.push(ProbeRecord {
            op_index: self.op_index,
            kind: ProbeKind::Write,
            address: addr,
        });
        self.store(addr, word);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mem(w: u32) -> CellMemory {
        CellMemory::new(w).unwrap()
    }

    #[test]
    fn unwritten_cell_reads_zero_and_is_logged() {
        let mut m = mem(64);
        assert_eq!(m.probe_read(7, 0).unwrap(), 0);
        assert_eq!(m.log().len(), 1);
        assert_eq!(m.log().entries()[0].kind, ProbeKind::Read);
    }

    #[test]
    fn read_after_write_and_last_writer_wins() {
        let mut m = mem(64);
        m.probe_write(7, 42, 0).unwrap();
        assert_eq!(m.probe_read(7, 0).unwrap(), 42);
        m.probe_write(3, 5, 1).unwrap();
        m.probe_write(3, 9, 1).unwrap();
        assert_eq!(m.probe_read(3, 1).unwrap(), 9);
    }

    #[test]
    fn address_and_word_width_bounds() {
        let mut m = mem(8);
        assert!(matches!(
            m.probe_read(256, 0),
            Err(ProbeError::AddressOutOfRange { addr: 256, .. })
        ));
        assert!(matches!(
            m.probe_write(0, 256, 0),
            Err(ProbeError::WordTooWide { word: 256, .. })
        ));
        m.probe_write(255, 255, 0).unwrap();
        assert_eq!(m.probe_read(255, 0).unwrap(), 255);
        // rejected probes are not logged
        assert_eq!(m.log().len(), 2);
    }

    #[test]
    fn one_record_per_probe() {
        let mut m = mem(64);
        for a in 0..100 {
            m.probe_write(a, a + 1, 0).unwrap();
        }
        assert_eq!(m.log().len(), 100);
        assert_eq!(m.log().probes_in(0), 100);
    }

    #[test]
    fn op_index_cannot_regress() {
        let mut m = mem(64);
        m.probe_read(0, 5).unwrap();
        assert!(matches!(
            m.probe_read(0, 4),
            Err(ProbeError::OpIndexRegressed { .. })
        ));
    }

    #[test]
    fn probe_sets_over_ranges() {
        let mut m = mem(64);
        m.probe_read(1, 0).unwrap();
        m.probe_read(2, 1).unwrap();
        m.probe_write(1, 3, 1).unwrap();
        m.probe_read(9, 3).unwrap();
        let log = m.log();
        assert!(log.probe_set(2..2).is_empty());
        assert_eq!(log.probe_set(0..4), BTreeSet::from([1, 2, 9]));
        assert_eq!(log.probe_set(1..2), BTreeSet::from([1, 2]));
        assert_eq!(log.per_op_counts(4), vec![1, 2, 0, 1]);
    }

    #[test]
    fn snapshot_restore_round_trip() {
        let mut m = mem(64);
        m.probe_write(1, 4, 0).unwrap();
        let snap = m.snapshot();
        m.probe_write(1, 9, 1).unwrap();
        m.restore(&snap);
        assert_eq!(m.probe_read(1, 1).unwrap(), 4);

        let fresh = mem(16).snapshot();
        m.restore(&fresh);
        assert_eq!(m.probe_read(1, 2).unwrap(), 0);
        assert_eq!(m.probe_read(12345, 2).unwrap(), 0);
    }

    #[test]
    fn csv_round_trip() {
        let mut m = mem(64);
        m.probe_read(10, 0).unwrap();
        m.probe_write(11, 1, 2).unwrap();
        let mut buf = Vec::new();
        m.log().write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("op_index,kind,address\n0,read,10\n2,write,11"));
        let back = ProbeLog::read_csv(&buf[..]).unwrap();
        assert_eq!(&back, m.log());
    }

    #[test]
    fn invalid_word_size() {
        assert!(CellMemory::new(0).is_err());
        assert!(CellMemory::new(65).is_err());
    }
}
