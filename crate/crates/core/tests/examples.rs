mod common;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use diu_core::comm_game::{build_merlin_message, GameInstance};
use diu_core::hard_instances::{counting_audit, gen_hard_bps, gen_hard_diu, DyadicLabel, HardDistParams};
use diu_core::multi_index::{map_f, sample_instance};
use diu_core::probe::{CellMemory, CellProbe};
use diu_core::reductions::BpsViaDiu;
use diu_core::structures::{run_ops, FpSequenceBank, Structure};
use diu_core::trace::Op;
use diu_core::Result;

/// Chi-square critical values at significance 0.01.
const CHI2_99_DF15: f64 = 30.578;
const CHI2_99_DF16: f64 = 32.000;

fn chi_square(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    let expected = total as f64 / counts.len() as f64;
    counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum()
}

#[test]
fn query_indices_are_uniform() {
    let b = 16u64;
    let mut counts = vec![0u64; b as usize];
    for seed in 0..63 {
        let trace = gen_hard_bps(&HardDistParams::new(100, b, 17, seed).unwrap()).unwrap();
        for op in &trace.ops {
            if let Op::BpsQuery { j } = op {
                for &x in j {
                    counts[x as usize - 1] += 1;
                }
            }
        }
    }
    assert!(counts.iter().sum::<u64>() >= 100_000);
    let stat = chi_square(&counts);
    assert!(stat < CHI2_99_DF15, "chi-square {stat}");
}

#[test]
fn x_coordinates_are_uniform_and_y_blocks_spread() {
    let (k, b, p) = (4usize, 16u64, 17u64);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut x_counts = vec![0u64; p as usize];
    let l = 8usize;
    let mut block_counts = vec![0u64; l + 1];
    let mut blocks = 0u64;
    for _ in 0..2000 {
        let inst = sample_instance(k, b, p, &mut rng).unwrap();
        for &v in &inst.x {
            x_counts[v as usize] += 1;
        }
        for yi in &inst.y {
            let mut per_block = vec![0usize; k];
            for &(blk, pos) in yi {
                per_block[blk] = pos + 1;
            }
            for v in per_block {
                block_counts[v] += 1;
                blocks += 1;
            }
        }
    }
    let stat = chi_square(&x_counts);
    assert!(stat < CHI2_99_DF16, "chi-square {stat}");
    for (v, &c) in block_counts.iter().enumerate() {
        let freq = c as f64 / blocks as f64;
        assert!(freq <= 1.0 / l as f64 + 0.02, "block value {v} has frequency {freq}");
    }
}

#[test]
fn update_phase_touches_every_entry_once() {
    for b_bits in 0..8 {
        let b = 1u64 << b_bits;
        let p = diu_core::field::next_prime(b);
        let trace = gen_hard_bps(&HardDistParams::new(3, b, p, 4).unwrap()).unwrap();
        let mut seen = vec![0; b as usize];
        for op in &trace.ops {
            if let Op::BpsUpdate { j, .. } = op {
                assert!(j.iter().all(|&x| x == j[0]));
                seen[j[0] as usize - 1] += 1;
            }
        }
        assert!(seen.iter().all(|&c| c == 1));
    }
}

#[test]
fn expanded_trace_agrees_with_the_bank() {
    for seed in 0..5 {
        let inst = gen_hard_diu(1 << 12, 0.4, seed).unwrap();
        let HardDistParams { k, b, p, .. } = inst.params;
        let bank = FpSequenceBank::new(k, b, p, 64, 0).unwrap();
        let mut mem = CellMemory::with_default_word_size();
        let direct = run_ops(&bank, &mut mem, &inst.bps.ops, 0..inst.bps.ops.len()).unwrap().values;
        assert_eq!(direct, inst.bps_answers);
        assert_eq!(common::interval_answers(inst.n_used, &inst.diu.ops), inst.diu_answers);
        assert!(inst.max_update_expansion <= 2 * k);
        assert!(inst.max_query_expansion <= 2 * k + 1);
        assert_eq!(inst.queries, b as usize);
    }
}

#[test]
fn tiny_expansion_replays_the_worked_example() {
    let inst = gen_hard_diu(12, 0.3, 0).unwrap();
    assert_eq!((inst.params.k, inst.params.b, inst.params.p), (2, 2, 3));
    let Op::BpsUpdate { j, v } = &inst.bps.ops[0] else { panic!("trace starts with an update") };
    assert_eq!(j, &vec![1, 1]);
    // U_0 writes entry 1 of both sequences, whose segments start at 0 and B p = 6
    let expected: Vec<Op> = [(0u64, v[0]), (6, v[1])]
        .into_iter()
        .filter(|&(_, x)| x != 0)
        .map(|(a, x)| Op::Insert { a, b: a + x })
        .collect();
    assert_eq!(&inst.diu.ops[..expected.len()], &expected[..]);
    assert_eq!(inst.bps_answers, common::bps_answers(2, 2, 3, &inst.bps.ops));
}

#[test]
fn merlin_message_matches_the_probe_log() {
    let params = HardDistParams::new(2, 16, 17, 21).unwrap();
    let trace = gen_hard_bps(&params).unwrap();
    let ds = BpsViaDiu::with_segment_tree(2, 16, 17, 64).unwrap();
    let mut mem = CellMemory::with_default_word_size();
    run_ops(&ds, &mut mem, &trace.ops, 0..trace.ops.len()).unwrap();
    for s in ["", "0", "1", "10", "011"] {
        let split = DyadicLabel::parse(s, 4).unwrap();
        let z = build_merlin_message(&ds, &trace.ops, &split, 64).unwrap();
        let p_a = mem.log().probe_set(split.left_ops());
        let p_b = mem.log().probe_set(split.right_ops());
        assert_eq!(z.len(), p_b.len());
        assert_eq!(z.ones(), p_b.intersection(&p_a).count());
    }
}

/// Touches no memory at all.
struct Silent;

impl Structure for Silent {
    fn name(&self) -> String {
        "silent".into()
    }

    fn apply(&self, _: &mut dyn CellProbe, op: &Op) -> Result<Option<u64>> {
        Ok(op.is_query().then_some(0))
    }
}

/// Reads a counter cell three times per operation and bumps it.
struct Counter;

impl Structure for Counter {
    fn name(&self) -> String {
        "counter".into()
    }

    fn apply(&self, mem: &mut dyn CellProbe, op: &Op) -> Result<Option<u64>> {
        let v = mem.read(0)? + mem.read(0)? + mem.read(0)?;
        mem.write(0, v / 3 + 1)?;
        Ok(op.is_query().then_some(v / 3))
    }
}

#[test]
fn message_shapes() {
    let trace = gen_hard_bps(&HardDistParams::new(1, 8, 11, 0).unwrap()).unwrap();
    let split = DyadicLabel::root(3).unwrap();
    assert!(build_merlin_message(&Silent, &trace.ops, &split, 64).unwrap().is_empty());
    let z = build_merlin_message(&Counter, &trace.ops, &split, 64).unwrap();
    assert_eq!(z.bits, vec![true]);
    let game = GameInstance::new(&Counter, &trace.ops, split, 64).unwrap();
    let out = game.play(&z, 0);
    assert!(out.accepted());
    let got: Vec<u64> = out.answers.unwrap().iter().map(|a| a.answer).collect();
    assert_eq!(got, vec![9, 11, 13, 15]);
}

#[test]
fn audit_on_segment_tree_run() {
    let params = HardDistParams::new(4, 64, 67, 3).unwrap();
    let trace = gen_hard_bps(&params).unwrap();
    let ds = BpsViaDiu::with_segment_tree(4, 64, 67, 64).unwrap();
    let mut mem = CellMemory::with_default_word_size();
    run_ops(&ds, &mut mem, &trace.ops, 0..trace.ops.len()).unwrap();
    let report = counting_audit(mem.log(), 6).unwrap();
    assert!(report.holds());
    assert_eq!(report.labels.len(), 63);
    for l in &report.labels {
        let s = DyadicLabel::parse(&l.s, 6).unwrap();
        let p0 = mem.log().probe_set(s.left_ops());
        let p1 = mem.log().probe_set(s.right_ops());
        assert_eq!((l.size_p0, l.size_p1), (p0.len(), p1.len()));
        assert_eq!(l.intersection, p0.intersection(&p1).count());
    }
    let json = serde_json::to_value(&report).unwrap();
    assert!(json["labels"][0].get("size_p0").is_some());
}

#[test]
fn counter_structure_single_cell_audit() {
    let trace = gen_hard_bps(&HardDistParams::new(1, 8, 11, 0).unwrap()).unwrap();
    let mut mem = CellMemory::with_default_word_size();
    run_ops(&Counter, &mut mem, &trace.ops, 0..trace.ops.len()).unwrap();
    let r = counting_audit(mem.log(), 3).unwrap();
    assert!(r.labels.iter().all(|l| l.referrals == 1));
    assert_eq!(r.total_referrals, 7);
    assert!(r.total_referrals <= r.total_probes);
}

#[test]
fn map_f_on_root_split_uses_half_the_entries() {
    let params = HardDistParams::new(2, 8, 11, 5).unwrap();
    let trace = gen_hard_bps(&params).unwrap();
    let inst = map_f(&trace.ops, &DyadicLabel::root(3).unwrap(), 11).unwrap();
    assert_eq!((inst.k, inst.l), (2, 4));
}
