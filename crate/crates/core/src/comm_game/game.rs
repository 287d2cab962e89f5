use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use super::sparse_set_disjointness;
use crate::hard_instances::DyadicLabel;
use crate::probe::{Addr, CellMemory, CellProbe, ProbeError, ProbeLog, Snapshot, Word};
use crate::structures::{run_ops, Structure};
use crate::trace::{Answer, Op};
use crate::{Error, Result};

/// `c` in `total <= c * (|P_A| + |P_B| + w |P_A & P_B|)`.
pub const COST_CONSTANT: u64 = 8;

/// One bit per cell first probed in `I_B`, in probe order: 1 iff the cell was probed in `I_A`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MerlinMessage {
    pub bits: Vec<bool>,
}

impl MerlinMessage {
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

impl fmt::Display for MerlinMessage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Ways to tamper with a message.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Corruption {
    /// Flip bit `k`.
    Flip(usize),
    /// Drop the last `k` bits.
    Truncate(usize),
    /// Append `k` bits, alternating from 0.
    Extend(usize),
}

impl Corruption {
    pub fn apply(&self, z: &MerlinMessage) -> Result<MerlinMessage> {
        let mut bits = z.bits.clone();
        match *self {
            Corruption::Flip(k) => {
                let len = bits.len();
                let bit = bits
                    .get_mut(k)
                    .ok_or_else(|| Error::Range(format!("flip position {k} outside a {len}-bit message")))?;
                *bit = !*bit;
            }
            Corruption::Truncate(k) => {
                if k == 0 || k > bits.len() {
                    return Err(Error::Range(format!("cannot drop {k} of {} bits", bits.len())));
                }
                bits.truncate(bits.len() - k);
            }
            Corruption::Extend(k) => {
                if k == 0 {
                    return Err(Error::Range("extension must add at least one bit".into()));
                }
                bits.extend((0..k).map(|i| i % 2 == 1));
            }
        }
        Ok(MerlinMessage { bits })
    }
}

impl FromStr for Corruption {
    type Err = Error;

    /// `flip:k`, `truncate:k` or `extend:k`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, arg) = s
            .split_once(':')
            .ok_or_else(|| Error::Config(format!("corruption {s:?} is not of the form kind:k")))?;
        let k: usize = arg
            .parse()
            .map_err(|_| Error::Config(format!("corruption argument {arg:?} is not an integer")))?;
        match kind {
            "flip" => Ok(Corruption::Flip(k)),
            "truncate" => Ok(Corruption::Truncate(k)),
            "extend" => Ok(Corruption::Extend(k)),
            other => Err(Error::Config(format!("unknown corruption {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostLedger {
    pub merlin_bits: u64,
    pub alice_bob_bits: u64,
    pub disjointness_bits: u64,
    pub total: u64,
}

impl CostLedger {
    fn seal(&mut self) {
        self.total = self.merlin_bits + self.alice_bob_bits + self.disjointness_bits;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Accept,
    Reject,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameOutcome {
    pub split: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    /// Answers of the queries in `I_B`, numbered from 0 within `I_B`; present iff accepted.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub answers: Option<Vec<Answer>>,
    pub ledger: CostLedger,
    pub word_size: u32,
    pub size_pa: usize,
    pub size_pb: usize,
    pub size_intersection: usize,
    pub c: u64,
    /// `c * (|P_A| + |P_B| + w |P_A & P_B|)`.
    pub bound: u64,
    pub within_bound: bool,
}

impl GameOutcome {
    pub fn accepted(&self) -> bool {
        self.verdict == Verdict::Accept
    }
}

/// Everything the parties hold before the game starts, computed once so that
/// many messages can be played against the same split.
pub struct GameInstance<'a> {
    structure: &'a dyn Structure,
    ops: &'a [Op],
    split: DyadicLabel,
    word_size: u32,
    /// Cells at the start of `I_A`: Bob's starting point.
    bob_start: Snapshot,
    /// Cells at the end of `I_A`: what Alice reveals on request.
    alice_end: Snapshot,
    p_a: FxHashSet<Addr>,
    p_b: BTreeSet<Addr>,
    truthful: MerlinMessage,
    reference: Vec<u64>,
    intersection: usize,
}

fn check_split(ops: &[Op], split: &DyadicLabel) -> Result<()> {
    let expected = 2usize << split.depth_limit();
    if ops.len() != expected {
        return Err(Error::Shape(format!(
            "split label assumes {expected} operations but the trace has {}",
            ops.len()
        )));
    }
    Ok(())
}

/// Monolithic run of `ops[..end]` recording the cells at `marks`.
fn monolithic(
    structure: &dyn Structure,
    ops: &[Op],
    end: usize,
    marks: [usize; 2],
    w: u32,
) -> Result<(Vec<Snapshot>, CellMemory, Vec<(usize, u64)>)> {
    let mut mem = CellMemory::new(w)?;
    let mut snaps = Vec::new();
    let mut answers = Vec::new();
    let mut start = 0;
    for mark in marks {
        let run = run_ops(structure, &mut mem, ops, start..mark)?;
        answers.extend(run.op_indices.into_iter().zip(run.values));
        snaps.push(mem.snapshot());
        start = mark;
    }
    let run = run_ops(structure, &mut mem, ops, start..end)?;
    answers.extend(run.op_indices.into_iter().zip(run.values));
    Ok((snaps, mem, answers))
}

fn message_from_log(log: &ProbeLog, b_ops: std::ops::Range<usize>, p_a: &FxHashSet<Addr>) -> MerlinMessage {
    let mut seen = FxHashSet::default();
    let bits = log
        .slice(b_ops)
        .iter()
        .filter(|r| seen.insert(r.address))
        .map(|r| p_a.contains(&r.address))
        .collect();
    MerlinMessage { bits }
}

impl<'a> GameInstance<'a> {
    pub fn new(structure: &'a dyn Structure, ops: &'a [Op], split: DyadicLabel, word_size: u32) -> Result<Self> {
        check_split(ops, &split)?;
        let (a_ops, b_ops) = (split.left_ops(), split.right_ops());
        let (snaps, mem, answers) =
            monolithic(structure, ops, b_ops.end, [a_ops.start, b_ops.start], word_size)?;
        let (snaps2, mem2, answers2) =
            monolithic(structure, ops, b_ops.end, [a_ops.start, b_ops.start], word_size)?;
        if mem.log() != mem2.log() || answers != answers2 || snaps != snaps2 {
            return Err(Error::Integrity(
                "the structure behaved differently on two identical runs".into(),
            ));
        }
        let log = mem.log();
        let p_a: FxHashSet<Addr> = log.slice(a_ops.clone()).iter().map(|r| r.address).collect();
        let p_b = log.probe_set(b_ops.clone());
        let intersection = p_b.iter().filter(|a| p_a.contains(a)).count();
        let truthful = message_from_log(log, b_ops.clone(), &p_a);
        let reference = answers
            .into_iter()
            .filter(|(t, _)| b_ops.contains(t))
            .map(|(_, v)| v)
            .collect();
        let mut snaps = snaps.into_iter();
        let bob_start = snaps.next().expect("two marks");
        let alice_end = snaps.next().expect("two marks");
        Ok(Self {
            structure,
            ops,
            split,
            word_size,
            bob_start,
            alice_end,
            p_a,
            p_b,
            truthful,
            reference,
            intersection,
        })
    }

    pub fn truthful_message(&self) -> &MerlinMessage {
        &self.truthful
    }

    /// Answers of a monolithic run for the queries in `I_B`.
    pub fn reference_answers(&self) -> &[u64] {
        &self.reference
    }

    pub fn size_pa(&self) -> usize {
        self.p_a.len()
    }

    pub fn size_pb(&self) -> usize {
        self.p_b.len()
    }

    pub fn size_intersection(&self) -> usize {
        self.intersection
    }

    pub fn bound(&self) -> u64 {
        COST_CONSTANT
            * (self.p_a.len() as u64
                + self.p_b.len() as u64
                + u64::from(self.word_size) * self.intersection as u64)
    }

    /// Plays the game with message `z`; `seed` drives the shared randomness of Alice and Bob.
    pub fn play(&self, z: &MerlinMessage, seed: u64) -> GameOutcome {
        let mut ledger = CostLedger { merlin_bits: z.len() as u64, ..CostLedger::default() };
        let result = self.play_inner(z, seed, &mut ledger);
        ledger.seal();
        let (verdict, reason, answers) = match result {
            Ok(values) => (
                Verdict::Accept,
                None,
                Some(
                    values
                        .into_iter()
                        .enumerate()
                        .map(|(query_index, answer)| Answer { query_index, answer })
                        .collect(),
                ),
            ),
            Err(reason) => (Verdict::Reject, Some(reason), None),
        };
        let bound = self.bound();
        GameOutcome {
            split: self.split.to_string(),
            verdict,
            reason,
            answers,
            ledger,
            word_size: self.word_size,
            size_pa: self.p_a.len(),
            size_pb: self.p_b.len(),
            size_intersection: self.intersection,
            c: COST_CONSTANT,
            bound,
            within_bound: ledger.total <= bound,
        }
    }

    fn play_inner(&self, z: &MerlinMessage, seed: u64, ledger: &mut CostLedger) -> std::result::Result<Vec<u64>, String> {
        let b_ops = self.split.right_ops();
        let mut bob = Intercept {
            own: CellMemory::from_snapshot(&self.bob_start, b_ops.start),
            alice: &self.alice_end,
            p_a: &self.p_a,
            z: &z.bits,
            cursor: 0,
            seen: FxHashSet::default(),
            zero_cells: FxHashSet::default(),
            fetch_bits: 0,
        };
        let mut answers = Vec::new();
        for t in b_ops {
            let step = bob
                .own
                .begin_op(t)
                .map_err(Error::from)
                .and_then(|_| self.structure.apply(&mut bob, &self.ops[t]));
            ledger.alice_bob_bits = bob.fetch_bits;
            match step {
                Ok(Some(v)) => answers.push(v),
                Ok(None) => {}
                Err(Error::Probe(ProbeError::Aborted(reason))) => return Err(reason),
                Err(e) => return Err(format!("bob's simulation failed: {e}")),
            }
        }
        if bob.cursor != z.bits.len() {
            return Err(format!(
                "message has {} bits but bob's simulation consumed {}",
                z.bits.len(),
                bob.cursor
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let disj = sparse_set_disjointness(&bob.zero_cells, &self.p_a, self.word_size, &mut rng);
        ledger.disjointness_bits = disj.bits_used;
        if !disj.disjoint {
            return Err("a cell bob read from his own copy was probed by alice".into());
        }
        Ok(answers)
    }
}

/// Bob's memory during the replay of `I_B`.
struct Intercept<'g> {
    own: CellMemory,
    alice: &'g Snapshot,
    p_a: &'g FxHashSet<Addr>,
    z: &'g [bool],
    cursor: usize,
    seen: FxHashSet<Addr>,
    zero_cells: FxHashSet<Addr>,
    fetch_bits: u64,
}

impl Intercept<'_> {
    fn first_touch(&mut self, addr: Addr) -> std::result::Result<(), ProbeError> {
        if !self.seen.insert(addr) {
            return Ok(());
        }
        let bit = *self.z.get(self.cursor).ok_or_else(|| {
            ProbeError::Aborted(format!("message ran out after {} bits", self.z.len()))
        })?;
        self.cursor += 1;
        if bit {
            self.fetch_bits += 2 * u64::from(self.own.word_size());
            if !self.p_a.contains(&addr) {
                return Err(ProbeError::Aborted(format!(
                    "alice rejects: cell {addr} was not probed during I_A"
                )));
            }
            self.own.poke(addr, self.alice.peek(addr))?;
        } else {
            self.zero_cells.insert(addr);
        }
        Ok(())
    }
}

impl CellProbe for Intercept<'_> {
    fn word_size(&self) -> u32 {
        self.own.word_size()
    }

    fn read(&mut self, addr: Addr) -> std::result::Result<Word, ProbeError> {
        self.first_touch(addr)?;
        self.own.read(addr)
    }

    fn write(&mut self, addr: Addr, word: Word) -> std::result::Result<(), ProbeError> {
        self.first_touch(addr)?;
        self.own.write(addr, word)
    }
}

/// Merlin's truthful message for `split`, checking that the structure replays deterministically.
pub fn build_merlin_message(
    structure: &dyn Structure,
    ops: &[Op],
    split: &DyadicLabel,
    word_size: u32,
) -> Result<MerlinMessage> {
    Ok(GameInstance::new(structure, ops, split.clone(), word_size)?.truthful.clone())
}

pub fn run_game(
    structure: &dyn Structure,
    ops: &[Op],
    split: &DyadicLabel,
    z: &MerlinMessage,
    word_size: u32,
    seed: u64,
) -> Result<GameOutcome> {
    Ok(GameInstance::new(structure, ops, split.clone(), word_size)?.play(z, seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hard_instances::{gen_hard_bps, HardDistParams};
    use crate::reductions::BpsViaDiu;

    #[test]
    fn truthful_accepts_and_every_flip_rejects() {
        let params = HardDistParams::new(2, 16, 17, 5).unwrap();
        let trace = gen_hard_bps(&params).unwrap();
        let ds = BpsViaDiu::with_segment_tree(2, 16, 17, 64).unwrap();
        for s in ["", "1", "01"] {
            let split = DyadicLabel::parse(s, 4).unwrap();
            let game = GameInstance::new(&ds, &trace.ops, split, 64).unwrap();
            let z = game.truthful_message().clone();
            assert_eq!(z.len(), game.size_pb());
            assert_eq!(z.ones(), game.size_intersection());
            let out = game.play(&z, 1);
            assert!(out.accepted(), "{:?}", out.reason);
            let got: Vec<u64> = out.answers.unwrap().iter().map(|a| a.answer).collect();
            assert_eq!(got, game.reference_answers());
            assert!(out.within_bound, "{:?} > {}", out.ledger, out.bound);
            for k in 0..z.len() {
                let bad = Corruption::Flip(k).apply(&z).unwrap();
                assert!(!game.play(&bad, k as u64).accepted(), "flip {k} accepted");
            }
            for c in [Corruption::Truncate(1), Corruption::Extend(1), Corruption::Extend(2)] {
                assert!(!game.play(&c.apply(&z).unwrap(), 0).accepted());
            }
        }
    }

    #[test]
    fn corruption_parsing() {
        assert_eq!("flip:3".parse::<Corruption>().unwrap(), Corruption::Flip(3));
        assert!("flip".parse::<Corruption>().is_err());
        assert!("bend:1".parse::<Corruption>().is_err());
    }
}
