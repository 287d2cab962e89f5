use rand::Rng;
use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

/// Consecutive non-shrinking turns of one side after which the sender's
/// live set is sent explicitly.
const STALL_LIMIT: u32 = 8;
/// Turn budget after which the explicit exchange is forced.
const MAX_TURNS: u32 = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisjointnessResult {
    pub disjoint: bool,
    pub bits_used: u64,
    pub rounds: u32,
    /// Whether the run ended with an explicit exchange of a live set.
    pub explicit: bool,
}

/// Bits of the Elias gamma code of `x + 1`.
pub fn elias_gamma_len(x: u64) -> u64 {
    2 * u64::from((x + 1).ilog2()) + 1
}

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn bucket(x: u64, key: u64, m: u64) -> u64 {
    ((u128::from(mix(x ^ key)) * u128::from(m)) >> 64) as u64
}

/// Zero-error disjointness of `s` (first speaker) and `t`.
///
/// The first speaker announces `|s|`. Then the parties alternate: the sender
/// hashes its live set with a fresh shared key into `2 * max(1, q)` buckets,
/// where `q` is the number of occupied buckets the other side reported last
/// (initially `|s|`), and sends the bucket bitmap. The receiver keeps only
/// elements landing in occupied buckets, so common elements are never
/// dropped. An empty bitmap proves the sender's live set empty. If one side
/// stops shrinking, its live set is sent explicitly at `universe_bits` per
/// element and the receiver answers with one bit.
pub fn sparse_set_disjointness<R: Rng + ?Sized>(
    s: &FxHashSet<u64>,
    t: &FxHashSet<u64>,
    universe_bits: u32,
    rng: &mut R,
) -> DisjointnessResult {
    let mut live = [s.clone(), t.clone()];
    let mut bits = elias_gamma_len(live[0].len() as u64);
    let mut proxy = live[0].len() as u64;
    let mut turn = 0usize;
    let mut stall = 0u32;
    let mut last_ones: [Option<u64>; 2] = [None, None];
    let mut rounds = 0u32;
    loop {
        rounds += 1;
        let m = 2 * proxy.max(1);
        let key: u64 = rng.random();
        let occupied: FxHashSet<u64> = live[turn].iter().map(|&x| bucket(x, key, m)).collect();
        bits += m;
        let ones = occupied.len() as u64;
        if ones == 0 {
            return DisjointnessResult { disjoint: true, bits_used: bits, rounds, explicit: false };
        }
        live[1 - turn].retain(|&x| occupied.contains(&bucket(x, key, m)));
        match last_ones[turn] {
            Some(prev) if ones >= prev => stall += 1,
            _ => stall = 0,
        }
        last_ones[turn] = Some(ones);
        if stall >= STALL_LIMIT || rounds >= MAX_TURNS {
            let sent = &live[turn];
            bits += sent.len() as u64 * u64::from(universe_bits)
                + elias_gamma_len(sent.len() as u64)
                + 1;
            let disjoint = sent.iter().all(|x| !live[1 - turn].contains(x));
            return DisjointnessResult { disjoint, bits_used: bits, rounds, explicit: true };
        }
        proxy = ones;
        turn ^= 1;
    }
}
