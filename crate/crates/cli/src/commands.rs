use std::io::{BufReader, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashSet;
use serde_json::json;

use diu_core::backend::{build_structure, run_backend, BackendKind, TraceParams};
use diu_core::comm_game::{sparse_set_disjointness, Corruption, GameInstance};
use diu_core::field::next_odd_prime;
use diu_core::hard_instances::{counting_audit, gen_hard_bps, gen_hard_diu, DyadicLabel, HardDistParams};
use diu_core::klee::{extent, klee_area, klee_oracle, read_rects_csv, write_rects_csv, ORACLE_CAP};
use diu_core::probe::{CellMemory, ProbeLog};
use diu_core::report::{aggregate, least_squares_slope, probe_scaling, write_aggregate_csv, write_game_csv, write_per_op_csv};
use diu_core::structures::{IntervalUnion, NaiveBitmap, SegmentTree};
use diu_core::trace::{write_answers, Answer, OperationSequence, TraceKind};
use diu_core::workload::{random_interval_ops, random_ps_ops, random_rects};

use crate::io::{self, config, CliError, CliResult, Ctx, TraceMeta};
use crate::{AuditArgs, DisjArgs, FuzzArgs, FuzzFamily, GameArgs, GenArgs, GenKind, KleeArgs, RunArgs, ScalingArgs};

fn need<T>(v: Option<T>, flag: &str, what: &str) -> CliResult<T> {
    v.ok_or_else(|| config(format!("--{flag} is required for {what}")))
}

fn log2_exact(b: u64, what: &str) -> CliResult<u32> {
    if b.is_power_of_two() {
        Ok(b.trailing_zeros())
    } else {
        Err(config(format!("{what} = {b} is not a power of two")))
    }
}

fn write_trace(ctx: &Ctx, out: Option<std::path::PathBuf>, seq: &OperationSequence, meta: TraceMeta) -> CliResult {
    let path = ctx.out_path(out, "trace.jsonl");
    let mut w = io::create(&path)?;
    seq.write_jsonl(&mut w)?;
    w.flush()?;
    io::write_json(&io::meta_path(&path), &meta)?;
    io::print_json(&json!({ "trace": path, "meta": meta }))
}

pub fn gen(ctx: &Ctx, a: GenArgs) -> CliResult {
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let base = TraceMeta { seed: a.seed, ..TraceMeta::default() };
    match a.kind {
        GenKind::Bps => {
            let params = HardDistParams::new(
                need(a.k, "K", "bps traces")?,
                need(a.b, "B", "bps traces")?,
                need(a.p, "p", "bps traces")?,
                a.seed,
            )?;
            let seq = gen_hard_bps(&params)?;
            let meta = TraceMeta {
                kind: "bps".into(),
                k: Some(params.k),
                b: Some(params.b),
                p: Some(params.p),
                ops: seq.len(),
                ..base
            };
            write_trace(ctx, a.out, &seq, meta)
        }
        GenKind::Diu => {
            let inst = gen_hard_diu(need(a.n, "n", "diu traces")?, need(a.eps, "eps", "diu traces")?, a.seed)?;
            let mut extra = serde_json::Map::new();
            for (key, v) in [
                ("n_requested", inst.n_requested as usize),
                ("inserts", inst.inserts),
                ("deletes", inst.deletes),
                ("queries", inst.queries),
                ("max_update_expansion", inst.max_update_expansion),
                ("max_query_expansion", inst.max_query_expansion),
            ] {
                extra.insert(key.into(), json!(v));
            }
            let meta = TraceMeta {
                kind: "diu".into(),
                n: Some(inst.n_used),
                k: Some(inst.params.k),
                b: Some(inst.params.b),
                p: Some(inst.params.p),
                ops: inst.diu.len(),
                extra,
                ..base
            };
            write_trace(ctx, a.out, &inst.diu, meta)
        }
        GenKind::Interval => {
            let n = need(a.n, "n", "interval traces")?;
            if n == 0 {
                return Err(config("n must be positive"));
            }
            let seq = OperationSequence::new(random_interval_ops(n, a.len, &mut rng));
            let meta = TraceMeta { kind: "interval".into(), n: Some(n), ops: seq.len(), ..base };
            write_trace(ctx, a.out, &seq, meta)
        }
        GenKind::Ps => {
            let n = need(a.n, "n", "ps traces")?;
            let r = n.isqrt();
            if n == 0 || r * r != n {
                return Err(config(format!("n = {n} is not a positive perfect square")));
            }
            let seq = OperationSequence::new(random_ps_ops(r, a.len, &mut rng));
            let meta = TraceMeta { kind: "ps".into(), n: Some(n), ops: seq.len(), ..base };
            write_trace(ctx, a.out, &seq, meta)
        }
        GenKind::Rects => {
            let n = need(a.n, "n", "rectangles")?;
            let rects = random_rects(a.len, n, &mut rng);
            let path = ctx.out_path(a.out, "rects.csv");
            let mut w = io::create(&path)?;
            write_rects_csv(&rects, &mut w)?;
            w.flush()?;
            io::print_json(&json!({ "rects": path, "count": rects.len(), "n": n, "seed": a.seed }))
        }
    }
}

pub fn run(ctx: &Ctx, a: RunArgs) -> CliResult {
    let trace = io::read_trace(&a.trace)?;
    let meta = io::read_meta(&a.trace)?.unwrap_or_default();
    let params = TraceParams {
        n: a.sizes.n.or(meta.n),
        b: a.sizes.b.or(meta.b),
        p: a.sizes.p.or(meta.p),
        w: a.sizes.w,
    };
    let kind: BackendKind = a.backend.parse()?;
    let out = run_backend(kind, &trace, &params)?;
    let answers: Vec<Answer> = out
        .answers
        .iter()
        .enumerate()
        .map(|(query_index, &answer)| Answer { query_index, answer })
        .collect();
    let answers_path = ctx.out_path(a.answers, "answers.jsonl");
    let mut w = io::create(&answers_path)?;
    write_answers(&answers, &mut w)?;
    w.flush()?;
    let mut summary = json!({
        "backend": out.backend,
        "ops": trace.len(),
        "queries": answers.len(),
        "answers": answers_path,
    });
    if let Some(log) = &out.log {
        let per_op = ctx.out_path(a.probes, "probes.csv");
        let mut w = io::create(&per_op)?;
        write_per_op_csv(&trace.ops, log, &mut w)?;
        w.flush()?;
        let stats = aggregate(&trace.ops, log);
        let agg = ctx.out_path(a.aggregate, "aggregate.csv");
        let mut w = io::create(&agg)?;
        write_aggregate_csv(&stats, &mut w)?;
        w.flush()?;
        let raw = ctx.out_path(a.log, "probe_log.csv");
        let mut w = io::create(&raw)?;
        log.write_csv(&mut w)?;
        w.flush()?;
        summary["total_probes"] = json!(log.len());
        summary["probes"] = json!(per_op);
        summary["aggregate"] = json!(agg);
        summary["log"] = json!(raw);
        summary["per_kind"] = json!(stats);
    }
    io::print_json(&summary)
}

pub fn klee(_ctx: &Ctx, a: KleeArgs) -> CliResult {
    let rects = read_rects_csv(BufReader::new(io::open(&a.input)?))?;
    let n = a.n.unwrap_or_else(|| extent(&rects)).max(1);
    let ds: Box<dyn IntervalUnion> = match a.backend.parse::<BackendKind>()? {
        BackendKind::SegmentTree => Box::new(SegmentTree::new(n, 64, 0)?),
        BackendKind::NaiveBitmap => Box::new(NaiveBitmap::new(n, 64, 0)?),
        other => return Err(config(format!("klee needs a cell-probe interval backend, not {other}"))),
    };
    let mut mem = CellMemory::with_default_word_size();
    let report = klee_area(&rects, ds.as_ref(), &mut mem)?;
    if a.check_oracle {
        let oracle = klee_oracle(&rects, ORACLE_CAP)?;
        if u128::from(oracle) != report.area {
            return Err(CliError::Violation(format!("sweep area {} but grid area {oracle}", report.area)));
        }
    }
    if let Some(path) = a.stats {
        io::write_json(&path, &json!({ "n": n, "rects": rects.len(), "backend": ds.backend_name(), "report": report }))?;
    }
    println!("{}", report.area);
    Ok(())
}

pub fn commgame(ctx: &Ctx, a: GameArgs) -> CliResult {
    let trace = io::read_trace(&a.trace)?;
    if trace.kind()? != Some(TraceKind::BatchPartialSum) {
        return Err(config("commgame needs a batch partial sum trace (gen --kind bps)"));
    }
    let meta = io::read_meta(&a.trace)?.unwrap_or_default();
    let b = (trace.len() / 2) as u64;
    if trace.len() % 2 != 0 {
        return Err(config(format!("a hard trace has an even number of operations, found {}", trace.len())));
    }
    let b_bits = log2_exact(b, "half the trace length")?;
    let split = DyadicLabel::parse(&a.split, b_bits)?;
    let p = need(a.p.or(meta.p), "p", "commgame (or a trace with a .meta.json)")?;
    let kind: BackendKind = a.backend.parse()?;
    let params = TraceParams { n: None, b: Some(b), p: Some(p), w: a.w };
    let ds = build_structure(kind, TraceKind::BatchPartialSum, &trace.ops, &params)?;
    let game = GameInstance::new(ds.as_ref(), &trace.ops, split, a.w)?;
    let mut z = game.truthful_message().clone();
    if let Some(c) = &a.corrupt {
        z = c.parse::<Corruption>()?.apply(&z)?;
    }
    let outcome = game.play(&z, a.seed);
    let path = ctx.out_path(a.out, "commgame.json");
    io::write_json(&path, &outcome)?;
    if let Some(report) = a.report {
        let mut w = io::create(&report)?;
        write_game_csv(std::slice::from_ref(&outcome), &mut w)?;
        w.flush()?;
    }
    io::print_json(&outcome)?;
    if a.corrupt.is_none() {
        if !outcome.accepted() {
            return Err(CliError::Violation(format!("truthful message rejected: {:?}", outcome.reason)));
        }
        if !outcome.within_bound {
            return Err(CliError::Violation(format!(
                "ledger total {} exceeds bound {}",
                outcome.ledger.total, outcome.bound
            )));
        }
    } else if outcome.accepted() {
        return Err(CliError::Violation("a corrupted message was accepted".into()));
    }
    Ok(())
}

pub fn audit(ctx: &Ctx, a: AuditArgs) -> CliResult {
    let log = ProbeLog::read_csv(BufReader::new(io::open(&a.log)?))?;
    let report = counting_audit(&log, log2_exact(a.b, "B")?)?;
    io::write_json(&ctx.out_path(a.out, "audit.json"), &report)?;
    io::print_json(&report)?;
    if !report.holds() {
        return Err(CliError::Violation("a counting identity failed".into()));
    }
    Ok(())
}

fn parse_set(s: &str) -> CliResult<FxHashSet<u64>> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse::<u64>().map_err(|_| config(format!("{x:?} is not a set element"))))
        .collect()
}

pub fn disjointness(ctx: &Ctx, a: DisjArgs) -> CliResult {
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    if let (Some(s), Some(t)) = (&a.s, &a.t) {
        let (s, t) = (parse_set(s)?, parse_set(t)?);
        let r = sparse_set_disjointness(&s, &t, a.universe_bits, &mut rng);
        if r.disjoint != s.is_disjoint(&t) {
            return Err(CliError::Violation("protocol verdict is wrong".into()));
        }
        return io::print_json(&r);
    }
    if !(1..=64).contains(&a.universe_bits) {
        return Err(config("--universe-bits must be in 1..=64"));
    }
    let universe = if a.universe_bits == 64 { u64::MAX } else { (1u64 << a.universe_bits) - 1 };
    let mut points = Vec::new();
    for &k in &a.k {
        if (2 * k) as u128 > u128::from(universe) + 1 {
            return Err(config(format!("k = {k} does not fit twice in the universe")));
        }
        let mut total = 0u64;
        for _ in 0..a.trials {
            let mut all = FxHashSet::default();
            while all.len() < 2 * k {
                all.insert(rng.random_range(0..=universe));
            }
            let mut v: Vec<u64> = all.into_iter().collect();
            v.sort_unstable();
            let (s, t): (FxHashSet<u64>, FxHashSet<u64>) =
                (v.iter().step_by(2).copied().collect(), v.iter().skip(1).step_by(2).copied().collect());
            let r = sparse_set_disjointness(&s, &t, a.universe_bits, &mut rng);
            if !r.disjoint {
                return Err(CliError::Violation("disjoint pair reported intersecting".into()));
            }
            total += r.bits_used;
        }
        points.push((k, total as f64 / a.trials.max(1) as f64));
    }
    let num: f64 = points.iter().map(|&(k, m)| k as f64 * m).sum();
    let den: f64 = points.iter().map(|&(k, _)| (k * k) as f64).sum();
    let c = if den > 0.0 { num / den } else { 0.0 };
    let xs: Vec<f64> = points.iter().map(|&(k, _)| k as f64).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, m)| m).collect();
    let rows: Vec<_> = points
        .iter()
        .map(|&(k, m)| json!({ "k": k, "mean_bits": m, "relative_deviation": m / (c * k as f64) - 1.0 }))
        .collect();
    let report = json!({
        "trials": a.trials,
        "universe_bits": a.universe_bits,
        "bits_per_element": c,
        "slope": least_squares_slope(&xs, &ys),
        "points": rows,
    });
    io::write_json(&ctx.out_path(a.out, "disjointness.json"), &report)?;
    io::print_json(&report)
}

pub fn fuzz(_ctx: &Ctx, a: FuzzArgs) -> CliResult {
    let mut checked = 0usize;
    let backends: &[BackendKind] = match a.family {
        FuzzFamily::Interval => &[
            BackendKind::NaiveBitmap,
            BackendKind::SegmentTree,
            BackendKind::Scc,
            BackendKind::ShortestPath,
            BackendKind::MincostFlow,
        ],
        FuzzFamily::Bps => &[BackendKind::Bank, BackendKind::SegmentTree, BackendKind::NaiveBitmap],
        FuzzFamily::Ps => &[BackendKind::Bank, BackendKind::SegmentTree, BackendKind::NaiveBitmap],
    };
    for trial in 0..a.trials {
        let mut rng = ChaCha8Rng::seed_from_u64(a.seed.wrapping_add(trial as u64));
        let (trace, params) = match a.family {
            FuzzFamily::Interval => {
                let n = rng.random_range(1..=a.n.max(1));
                (OperationSequence::new(random_interval_ops(n, a.len, &mut rng)), TraceParams { n: Some(n), ..TraceParams::new(64) })
            }
            FuzzFamily::Bps => {
                let k = rng.random_range(1..=4);
                let b = 1u64 << rng.random_range(1..=5u32);
                let p = next_odd_prime(b);
                let trace = gen_hard_bps(&HardDistParams::new(k, b, p, rng.random())?)?;
                (trace, TraceParams { b: Some(b), p: Some(p), ..TraceParams::new(64) })
            }
            FuzzFamily::Ps => {
                let r = rng.random_range(1..=a.n.clamp(1, 64));
                (OperationSequence::new(random_ps_ops(r, a.len, &mut rng)), TraceParams { n: Some(r * r), ..TraceParams::new(64) })
            }
        };
        let reference = run_backend(backends[0], &trace, &params)?.answers;
        for &kind in &backends[1..] {
            let got = run_backend(kind, &trace, &params)?.answers;
            if got != reference {
                return Err(CliError::Violation(format!(
                    "trial {trial}: {kind} disagrees with {}",
                    backends[0]
                )));
            }
        }
        checked += reference.len();
    }
    let names: Vec<&str> = backends.iter().map(|b| b.as_str()).collect();
    io::print_json(&json!({ "trials": a.trials, "backends": names, "queries_compared": checked, "mismatches": 0 }))
}

pub fn scaling(ctx: &Ctx, a: ScalingArgs) -> CliResult {
    if a.min_exp > a.max_exp || a.max_exp > 24 || a.min_exp == 0 {
        return Err(config("need 1 <= --min-exp <= --max-exp <= 24"));
    }
    let ns: Vec<u64> = (a.min_exp..=a.max_exp).map(|e| 1u64 << e).collect();
    let report = probe_scaling(&ns, a.ops, a.seed)?;
    let path = ctx.out_path(a.out, "scaling.csv");
    let mut w = io::create(&path)?;
    writeln!(w, "n,log2_n,updates,mean_update_probes,max_update_probes,bound")?;
    for p in &report.points {
        writeln!(
            w,
            "{},{},{},{:.3},{},{:.1}",
            p.n, p.log2_n, p.updates, p.mean_update_probes, p.max_update_probes, p.bound
        )?;
    }
    w.flush()?;
    io::print_json(&json!({ "csv": path, "slope": report.slope, "monotone": report.monotone, "points": report.points }))?;
    if let Some(p) = report.points.iter().find(|p| p.max_update_probes as f64 > p.bound) {
        return Err(CliError::Violation(format!("n = {}: {} probes exceed {:.0}", p.n, p.max_update_probes, p.bound)));
    }
    Ok(())
}
