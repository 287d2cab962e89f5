use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::bit_reverse;
use crate::field::{is_prime, next_odd_prime};
use crate::probe::CellMemory;
use crate::reductions::BpsViaDiu;
use crate::trace::{Op, OperationSequence};
use crate::{Error, Result};

/// Parameters of the hard distribution: `K` sequences of length `B = 2^b`
/// over `F_p` with `p >= B` prime, sampled from a seeded ChaCha8 stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HardDistParams {
    pub k: usize,
    pub b: u64,
    pub p: u64,
    pub seed: u64,
}

impl HardDistParams {
    pub fn new(k: usize, b: u64, p: u64, seed: u64) -> Result<Self> {
        let params = Self { k, b, p, seed };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::Config("K must be at least 1".into()));
        }
        if !self.b.is_power_of_two() || self.b > 1 << 40 {
            return Err(Error::Config(format!("B = {} is not a power of two (at most 2^40)", self.b)));
        }
        if !is_prime(self.p) {
            return Err(Error::Config(format!("p = {} is not prime", self.p)));
        }
        if self.p < self.b {
            return Err(Error::Config(format!("need p >= B (got p = {}, B = {})", self.p, self.b)));
        }
        Ok(())
    }

    /// `b = log2 B`.
    pub fn log_b(&self) -> u32 {
        self.b.trailing_zeros()
    }

    pub fn num_ops(&self) -> usize {
        2 * self.b as usize
    }
}

/// `U_0, Q_0, ..., U_{B-1}, Q_{B-1}`: `U_t` writes a fresh uniform value at
/// index `rev(t) + 1` of every sequence, `Q_t` asks a uniform prefix per sequence.
pub fn gen_hard_bps(params: &HardDistParams) -> Result<OperationSequence> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let b_bits = params.log_b();
    let mut ops = Vec::with_capacity(params.num_ops());
    for t in 0..params.b {
        let idx = bit_reverse(t, b_bits)? + 1;
        let v = (0..params.k).map(|_| rng.random_range(0..params.p)).collect();
        ops.push(Op::BpsUpdate { j: vec![idx; params.k], v });
        let j = (0..params.k).map(|_| rng.random_range(1..=params.b)).collect();
        ops.push(Op::BpsQuery { j });
    }
    Ok(OperationSequence { ops })
}

/// `B` = largest power of two `<= n^eps`, `p` = smallest odd prime `>= B`,
/// `K = max(1, floor(n / (B p)))`.
pub fn solve_diu_params(n: u64, eps: f64, seed: u64) -> Result<HardDistParams> {
    if n == 0 {
        return Err(Error::Config("n must be positive".into()));
    }
    if !(eps.is_finite() && eps > 0.0 && eps <= 1.0) {
        return Err(Error::Config(format!("eps = {eps} must lie in (0, 1]")));
    }
    let target = (n as f64).powf(eps);
    let mut b = 1u64;
    while (b * 2) as f64 <= target * (1.0 + 1e-12) && b < 1 << 40 {
        b *= 2;
    }
    let p = next_odd_prime(b);
    let k = usize::try_from((n / (b * p)).max(1))
        .map_err(|_| Error::Config("K does not fit in usize".into()))?;
    HardDistParams::new(k, b, p, seed)
}

/// A hard interval-union trace together with the batch trace it came from.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HardDiuInstance {
    pub params: HardDistParams,
    pub n_requested: u64,
    pub n_used: u64,
    pub bps: OperationSequence,
    pub diu: OperationSequence,
    /// Answers of the batch queries, in `F_p`.
    pub bps_answers: Vec<u64>,
    /// Union lengths answered along the interval trace.
    pub diu_answers: Vec<u64>,
    pub inserts: usize,
    pub deletes: usize,
    pub queries: usize,
    /// Largest number of interval operations issued for one batch update.
    pub max_update_expansion: usize,
    /// Largest number of interval operations issued for one batch query.
    pub max_query_expansion: usize,
}

pub fn gen_hard_diu(n: u64, eps: f64, seed: u64) -> Result<HardDiuInstance> {
    let params = solve_diu_params(n, eps, seed)?;
    expand_hard_bps(params, n)
}

/// Samples the batch trace for `params` and pushes it through the reduction.
pub fn expand_hard_bps(params: HardDistParams, n_requested: u64) -> Result<HardDiuInstance> {
    let bps = gen_hard_bps(&params)?;
    let adapter = BpsViaDiu::with_segment_tree(params.k, params.b, params.p, 64)?;
    let mut mem = CellMemory::with_default_word_size();
    let mut diu = Vec::new();
    let (mut bps_answers, mut diu_answers) = (Vec::new(), Vec::new());
    let (mut max_u, mut max_q) = (0, 0);
    for op in &bps.ops {
        match op {
            Op::BpsUpdate { j, v } => {
                let issued = adapter.update(&mut mem, j, v)?;
                max_u = max_u.max(issued.len());
                diu.extend(issued);
            }
            Op::BpsQuery { j } => {
                let (union, issued) = adapter.query_union(&mut mem, j)?;
                diu_answers.push(union);
                bps_answers.push(union % params.p);
                max_q = max_q.max(issued.len());
                diu.extend(issued);
            }
            other => return Err(Error::Shape(format!("unexpected {} in batch trace", other.kind()))),
        }
    }
    let count = |f: fn(&Op) -> bool| diu.iter().filter(|op| f(op)).count();
    let inserts = count(|op| matches!(op, Op::Insert { .. }));
    let deletes = count(|op| matches!(op, Op::Delete { .. }));
    let queries = count(|op| matches!(op, Op::Query));
    Ok(HardDiuInstance {
        n_used: adapter.universe(),
        n_requested,
        params,
        bps,
        diu: OperationSequence { ops: diu },
        bps_answers,
        diu_answers,
        inserts,
        deletes,
        queries,
        max_update_expansion: max_u,
        max_query_expansion: max_q,
    })
}
