mod common;

use proptest::collection::vec;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashSet;

use diu_core::comm_game::{sparse_set_disjointness, GameInstance};
use diu_core::hard_instances::{bit_reverse, counting_audit, gen_hard_bps, DyadicLabel, HardDistParams};
use diu_core::klee::{klee_area_segment_tree, Rect};
use diu_core::multi_index::{eval_f, map_f};
use diu_core::probe::{CellMemory, CellProbe, ProbeKind, ProbeLog, ProbeRecord};
use diu_core::reductions::{BpsViaDiu, DynamicUnion, FlowBackend, SccBackend, ShortestPathBackend};
use diu_core::structures::{run_ops, FpSequenceBank, Interval, NaiveBitmap, SegmentTree};
use diu_core::trace::{Op, OperationSequence};

/// A legal interval trace over `[0, n]` driven by a list of choices.
fn legal_ops(n: u64, choices: &[(u8, u64, u64, usize)]) -> Vec<Op> {
    let mut live: Vec<(u64, u64)> = Vec::new();
    let mut ops = Vec::new();
    for &(kind, x, y, pick) in choices {
        match kind % 4 {
            0 => ops.push(Op::Query),
            1 if !live.is_empty() => {
                let (a, b) = live.swap_remove(pick % live.len());
                ops.push(Op::Delete { a, b });
            }
            _ => {
                let (x, y) = (x % (n + 1), y % (n + 1));
                let (a, b) = (x.min(y), x.max(y));
                live.push((a, b));
                ops.push(Op::Insert { a, b });
            }
        }
    }
    ops.push(Op::Query);
    ops
}

fn choices() -> impl Strategy<Value = Vec<(u8, u64, u64, usize)>> {
    vec((any::<u8>(), any::<u64>(), any::<u64>(), any::<usize>()), 0..80)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn segment_tree_matches_cover_oracle(n in 1u64..200, ch in choices(), w in prop_oneof![Just(24u32), Just(32), Just(64)]) {
        let ops = legal_ops(n, &ch);
        let tree = SegmentTree::new(n, w, 0).unwrap();
        let mut mem = CellMemory::new(w).unwrap();
        let got = run_ops(&tree, &mut mem, &ops, 0..ops.len()).unwrap().values;
        prop_assert_eq!(got, common::interval_answers(n, &ops));
    }

    #[test]
    fn naive_bitmap_matches_cover_oracle(n in 1u64..100, ch in choices()) {
        let ops = legal_ops(n, &ch);
        let ds = NaiveBitmap::new(n, 64, 0).unwrap();
        let mut mem = CellMemory::with_default_word_size();
        let got = run_ops(&ds, &mut mem, &ops, 0..ops.len()).unwrap().values;
        prop_assert_eq!(got, common::interval_answers(n, &ops));
    }

    #[test]
    fn graph_backends_encode_the_live_multiset(n in 1u64..24, ch in choices()) {
        let ops = legal_ops(n, &ch);
        let mut scc = SccBackend::new(n).unwrap();
        let mut sp = ShortestPathBackend::new(n).unwrap();
        let mut flow = FlowBackend::new(n).unwrap();
        let mut live: Vec<Interval> = Vec::new();
        let expected = common::interval_answers(n, &ops);
        let mut q = 0;
        for op in &ops {
            let backends: [&mut dyn DynamicUnion; 3] = [&mut scc, &mut sp, &mut flow];
            match *op {
                Op::Insert { a, b } => {
                    for g in backends { g.insert(a, b).unwrap(); }
                    live.push(Interval { a, b });
                }
                Op::Delete { a, b } => {
                    for g in backends { g.delete(a, b).unwrap(); }
                    let at = live.iter().position(|iv| *iv == Interval { a, b }).unwrap();
                    live.remove(at);
                }
                Op::Query => {
                    for g in backends { prop_assert_eq!(g.query().unwrap(), expected[q]); }
                    q += 1;
                }
                _ => unreachable!(),
            }
            prop_assert_eq!(scc.edges(), SccBackend::from_intervals(n, &live).unwrap().edges());
            prop_assert_eq!(sp.edges(), ShortestPathBackend::from_intervals(n, &live).unwrap().edges());
            prop_assert_eq!(flow.edges(), FlowBackend::from_intervals(n, &live).unwrap().edges());
        }
    }

    #[test]
    fn probe_sets_grow_with_the_range(addrs in vec((0usize..20, 0u64..50), 0..200), lo in 0usize..20, mid in 0usize..20, hi in 0usize..21) {
        let mut recs: Vec<ProbeRecord> = addrs
            .iter()
            .map(|&(op_index, address)| ProbeRecord { op_index, kind: ProbeKind::Read, address })
            .collect();
        recs.sort_by_key(|r| r.op_index);
        let log = ProbeLog::from_records(recs).unwrap();
        let mut bounds = [lo, mid, hi];
        bounds.sort_unstable();
        let [a, b, c] = bounds;
        let inner = log.probe_set(a..b);
        let outer = log.probe_set(a..c);
        prop_assert!(inner.is_subset(&outer));
        let right = log.probe_set(b..c);
        let union: std::collections::BTreeSet<u64> = inner.union(&right).copied().collect();
        prop_assert_eq!(union, outer);
    }

    #[test]
    fn snapshot_restore_roundtrip(writes in vec((0u64..64, any::<u64>()), 0..50), more in vec((0u64..64, any::<u64>()), 0..50)) {
        let mut mem = CellMemory::with_default_word_size();
        for &(a, v) in &writes { mem.write(a, v).unwrap(); }
        let snap = mem.snapshot();
        let before: Vec<u64> = (0..64).map(|a| mem.peek(a)).collect();
        for &(a, v) in &more { mem.write(a, v).unwrap(); }
        mem.restore(&snap);
        let after: Vec<u64> = (0..64).map(|a| mem.peek(a)).collect();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn batch_reduction_matches_direct(seed in any::<u64>(), k in 1usize..5, b_bits in 1u32..5) {
        let b = 1u64 << b_bits;
        let p = diu_core::field::next_odd_prime(b);
        let params = HardDistParams::new(k, b, p, seed).unwrap();
        let trace = gen_hard_bps(&params).unwrap();
        let expect = common::bps_answers(k, b, p, &trace.ops);
        let ad = BpsViaDiu::with_naive(k, b, p, 64).unwrap();
        let bank = FpSequenceBank::new(k, b, p, 64, 0).unwrap();
        for ds in [&ad as &dyn diu_core::structures::Structure, &bank] {
            let mut mem = CellMemory::with_default_word_size();
            prop_assert_eq!(&run_ops(ds, &mut mem, &trace.ops, 0..trace.ops.len()).unwrap().values, &expect);
        }
    }

    #[test]
    fn bank_queries_are_linear_in_values(seed in any::<u64>(), scale in 0u64..11) {
        let (k, b, p) = (3usize, 8u64, 11u64);
        let params = HardDistParams::new(k, b, p, seed).unwrap();
        let trace = gen_hard_bps(&params).unwrap();
        let scaled: Vec<Op> = trace.ops.iter().map(|op| match op {
            Op::BpsUpdate { j, v } => Op::BpsUpdate { j: j.clone(), v: v.iter().map(|x| x * scale % p).collect() },
            other => other.clone(),
        }).collect();
        let bank = FpSequenceBank::new(k, b, p, 64, 0).unwrap();
        let mut m1 = CellMemory::with_default_word_size();
        let mut m2 = CellMemory::with_default_word_size();
        let base = run_ops(&bank, &mut m1, &trace.ops, 0..trace.ops.len()).unwrap().values;
        let got = run_ops(&bank, &mut m2, &scaled, 0..scaled.len()).unwrap().values;
        let expect: Vec<u64> = base.iter().map(|x| x * scale % p).collect();
        prop_assert_eq!(got, expect);
    }

    #[test]
    fn audit_identities_hold_for_any_log(b in 1u32..6, addrs in vec((any::<usize>(), 0u64..30), 0..300)) {
        let ops = 2usize << b;
        let mut recs: Vec<ProbeRecord> = addrs
            .iter()
            .map(|&(o, address)| ProbeRecord { op_index: o % ops, kind: ProbeKind::Write, address })
            .collect();
        recs.sort_by_key(|r| r.op_index);
        let report = counting_audit(&ProbeLog::from_records(recs).unwrap(), b).unwrap();
        prop_assert!(report.holds());
        prop_assert!(report.labels.iter().all(|l| l.referrals <= l.size_p0.min(l.size_p1)));
    }

    #[test]
    fn disjointness_is_exact(s in vec(0u64..64, 0..20), t in vec(0u64..64, 0..20), seed in any::<u64>()) {
        let s: FxHashSet<u64> = s.into_iter().collect();
        let t: FxHashSet<u64> = t.into_iter().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = sparse_set_disjointness(&s, &t, 6, &mut rng);
        prop_assert_eq!(r.disjoint, s.is_disjoint(&t));
    }

    #[test]
    fn klee_is_order_independent(rects in vec((0u64..40, 0u64..40, 0u64..40, 0u64..40), 0..30), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut rs: Vec<Rect> = rects
            .into_iter()
            .map(|(a, b, c, d)| Rect::new(a.min(b), a.max(b), c.min(d), c.max(d)).unwrap())
            .collect();
        let area = klee_area_segment_tree(&rs, 40).unwrap().area;
        prop_assert_eq!(area, u128::from(common::grid_area(&rs, 40)));
        rs.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(klee_area_segment_tree(&rs, 40).unwrap().area, area);
    }

    #[test]
    fn map_f_respects_blocks(seed in any::<u64>(), k in 1usize..6, b_bits in 1u32..6, depth_seed in any::<u64>()) {
        let b = 1u64 << b_bits;
        let p = diu_core::field::next_odd_prime(b);
        let params = HardDistParams::new(k, b, p, seed).unwrap();
        let trace = gen_hard_bps(&params).unwrap();
        let depth = (depth_seed % u64::from(b_bits)) as usize;
        let bits: Vec<bool> = (0..depth).map(|i| depth_seed >> (8 + i) & 1 == 1).collect();
        let split = DyadicLabel::new(bits, b_bits).unwrap();
        let inst = map_f(&trace.ops, &split, p).unwrap();
        prop_assert!(inst.validate().is_ok());
        prop_assert_eq!(inst.l, (b >> (depth + 1)) as usize);
        prop_assert_eq!(inst.y.len(), inst.l);
        let naive: Vec<u64> = (0..inst.l)
            .map(|i| {
                let y = inst.dense_y(i);
                let mut acc = 0u64;
                for c in 0..inst.dimension() {
                    acc = (acc + inst.x[c] * u64::from(y[c])) % p;
                }
                acc
            })
            .collect();
        prop_assert_eq!(eval_f(&inst), naive);
    }

    #[test]
    fn trace_jsonl_roundtrip(ch in choices()) {
        let seq = OperationSequence::new(legal_ops(50, &ch));
        let mut buf = Vec::new();
        seq.write_jsonl(&mut buf).unwrap();
        prop_assert_eq!(OperationSequence::read_jsonl(buf.as_slice()).unwrap(), seq);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn truthful_merlin_is_always_accepted(seed in any::<u64>(), depth in 0usize..3, side in any::<u8>()) {
        let params = HardDistParams::new(2, 16, 17, seed).unwrap();
        let trace = gen_hard_bps(&params).unwrap();
        let ds = BpsViaDiu::with_segment_tree(2, 16, 17, 64).unwrap();
        let bits: Vec<bool> = (0..depth).map(|i| side >> i & 1 == 1).collect();
        let game = GameInstance::new(&ds, &trace.ops, DyadicLabel::new(bits, 4).unwrap(), 64).unwrap();
        let out = game.play(game.truthful_message(), seed);
        prop_assert!(out.accepted());
        prop_assert!(out.within_bound);
    }
}

#[test]
fn bit_reverse_is_an_involution() {
    for b in 0..=12u32 {
        let mut seen = vec![false; 1 << b];
        for t in 0..1u64 << b {
            let r = bit_reverse(t, b).unwrap();
            assert_eq!(bit_reverse(r, b).unwrap(), t);
            seen[r as usize] = true;
        }
        assert!(seen.iter().all(|&x| x));
    }
}
