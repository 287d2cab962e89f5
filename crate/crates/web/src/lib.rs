//! Browser bindings for the interactive demo page.
//!
//! Every export takes plain numbers or text and returns a JSON string, so the
//! page needs no glue beyond `JSON.parse`. Failures come back as
//! `{"error": "..."}` rather than exceptions.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use wasm_bindgen::prelude::*;

use diu_core::backend::{build_structure, BackendKind, TraceParams};
use diu_core::comm_game::{Corruption, GameInstance};
use diu_core::hard_instances::{gen_hard_bps, DyadicLabel, HardDistParams};
use diu_core::klee::{extent, klee_area, klee_oracle, read_rects_csv, write_rects_csv, ORACLE_CAP};
use diu_core::probe::{CellMemory, ProbeKind};
use diu_core::structures::{IntervalUnion, NaiveBitmap, SegmentTree};
use diu_core::trace::TraceKind;
use diu_core::workload::random_rects;

fn respond<T: Serialize>(r: Result<T, String>) -> String {
    match r {
        Ok(v) => serde_json::to_string(&v).unwrap_or_else(|e| json!({ "error": e.to_string() }).to_string()),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Step {
    Insert(u64, u64),
    Delete(u64, u64),
    Query,
}

/// One op per line: `+ a b`, `- a b` or `?`. Blank lines and `#` comments are skipped.
fn parse_script(script: &str) -> Result<Vec<(usize, Step)>, String> {
    let mut out = Vec::new();
    for (i, raw) in script.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = || format!("line {}: expected '+ a b', '- a b' or '?', got {raw:?}", i + 1);
        let mut parts = line.split_whitespace();
        let head = parts.next().ok_or_else(bad)?;
        let mut num = || -> Result<u64, String> { parts.next().and_then(|s| s.parse().ok()).ok_or_else(bad) };
        let step = match head {
            "+" | "insert" => Step::Insert(num()?, num()?),
            "-" | "delete" => Step::Delete(num()?, num()?),
            "?" | "query" => Step::Query,
            _ => return Err(bad()),
        };
        out.push((i + 1, step));
    }
    Ok(out)
}

fn merged(active: &[(u64, u64)]) -> Vec<(u64, u64)> {
    let mut v = active.to_vec();
    v.sort_unstable();
    let mut out: Vec<(u64, u64)> = Vec::new();
    for (a, b) in v {
        match out.last_mut() {
            Some(last) if a <= last.1 => last.1 = last.1.max(b),
            _ => out.push((a, b)),
        }
    }
    out
}

#[derive(Serialize)]
struct StepView {
    line: usize,
    op: String,
    answer: Option<u64>,
    tree_reads: usize,
    tree_writes: usize,
    naive_probes: usize,
    cells: Vec<u64>,
    union: Vec<(u64, u64)>,
}

#[derive(Serialize)]
struct IntervalView {
    n: u64,
    steps: Vec<StepView>,
    tree_total: usize,
    naive_total: usize,
}

fn interval_union_impl(n: u64, script: &str) -> Result<IntervalView, String> {
    let steps = parse_script(script)?;
    let tree = SegmentTree::new(n, 64, 0).map_err(|e| e.to_string())?;
    let naive = NaiveBitmap::new(n, 64, 0).map_err(|e| e.to_string())?;
    let mut tm = CellMemory::with_default_word_size();
    let mut nm = CellMemory::with_default_word_size();
    let mut active: Vec<(u64, u64)> = Vec::new();
    let mut views = Vec::new();
    for (t, &(line, step)) in steps.iter().enumerate() {
        let ctx = |e: diu_core::Error| format!("line {line}: {e}");
        tm.begin_op(t).map_err(|e| ctx(e.into()))?;
        nm.begin_op(t).map_err(|e| ctx(e.into()))?;
        let (op, answer) = match step {
            Step::Insert(a, b) => {
                tree.insert(&mut tm, a, b).map_err(ctx)?;
                naive.insert(&mut nm, a, b).map_err(ctx)?;
                active.push((a, b));
                (format!("insert [{a}, {b}]"), None)
            }
            Step::Delete(a, b) => {
                tree.delete(&mut tm, a, b).map_err(ctx)?;
                naive.delete(&mut nm, a, b).map_err(ctx)?;
                let pos = active.iter().position(|&x| x == (a, b)).ok_or_else(|| format!("line {line}: [{a}, {b}] is not present"))?;
                active.swap_remove(pos);
                (format!("delete [{a}, {b}]"), None)
            }
            Step::Query => {
                let x = tree.query(&mut tm).map_err(ctx)?;
                let y = naive.query(&mut nm).map_err(ctx)?;
                if x != y {
                    return Err(format!("line {line}: backends disagree ({x} vs {y})"));
                }
                ("query".to_string(), Some(x))
            }
        };
        let mine = tm.log().slice(t..t + 1);
        let mut cells: Vec<u64> = mine.iter().map(|r| r.address).collect();
        cells.sort_unstable();
        cells.dedup();
        views.push(StepView {
            line,
            op,
            answer,
            tree_reads: mine.iter().filter(|r| r.kind == ProbeKind::Read).count(),
            tree_writes: mine.iter().filter(|r| r.kind == ProbeKind::Write).count(),
            naive_probes: nm.log().probes_in(t),
            cells,
            union: merged(&active),
        });
    }
    Ok(IntervalView { n, steps: views, tree_total: tm.log().len(), naive_total: nm.log().len() })
}

/// Replays an interval script on the segment tree and the bitmap side by side.
#[wasm_bindgen]
pub fn interval_union(n: u64, script: &str) -> String {
    respond(interval_union_impl(n, script))
}

fn klee_impl(csv: &str) -> Result<serde_json::Value, String> {
    let rects = read_rects_csv(csv.as_bytes()).map_err(|e| e.to_string())?;
    let n = extent(&rects).max(1);
    let tree = SegmentTree::new(n, 64, 0).map_err(|e| e.to_string())?;
    let mut mem = CellMemory::with_default_word_size();
    let report = klee_area(&rects, &tree, &mut mem).map_err(|e| e.to_string())?;
    let oracle = if n <= ORACLE_CAP { Some(klee_oracle(&rects, ORACLE_CAP).map_err(|e| e.to_string())?) } else { None };
    Ok(json!({
        "n": n,
        "rects": rects,
        "area": report.area.to_string(),
        "oracle": oracle,
        "report": {
            "inserts": report.inserts,
            "deletes": report.deletes,
            "queries": report.queries,
            "total_probes": report.total_probes,
        },
    }))
}

/// Union area of rectangles given as `x1,x2,y1,y2` CSV rows.
#[wasm_bindgen]
pub fn klee(csv: &str) -> String {
    respond(klee_impl(csv))
}

/// A random rectangle set in the CSV format [`klee`] reads.
#[wasm_bindgen]
pub fn random_rects_csv(count: usize, max: u64, seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rects = random_rects(count, max.max(1), &mut rng);
    let mut buf = Vec::new();
    match write_rects_csv(&rects, &mut buf) {
        Ok(()) => String::from_utf8(buf).unwrap_or_default(),
        Err(e) => json!({ "error": e.to_string() }).to_string(),
    }
}

fn comm_game_impl(k: usize, b: u64, p: u64, seed: u64, split: &str, corrupt: &str) -> Result<serde_json::Value, String> {
    let err = |e: diu_core::Error| e.to_string();
    let params = HardDistParams::new(k, b, p, seed).map_err(err)?;
    let trace = gen_hard_bps(&params).map_err(err)?;
    let label = DyadicLabel::parse(split, params.log_b()).map_err(err)?;
    let tp = TraceParams { n: None, b: Some(b), p: Some(p), w: 64 };
    let ds = build_structure(BackendKind::SegmentTree, TraceKind::BatchPartialSum, &trace.ops, &tp).map_err(err)?;
    let game = GameInstance::new(ds.as_ref(), &trace.ops, label, 64).map_err(err)?;
    let truthful = game.truthful_message().clone();
    let z = if corrupt.trim().is_empty() {
        truthful.clone()
    } else {
        corrupt.trim().parse::<Corruption>().map_err(err)?.apply(&truthful).map_err(err)?
    };
    let outcome = game.play(&z, seed);
    let labels: Vec<String> = DyadicLabel::all(params.log_b()).iter().map(|l| l.to_string()).collect();
    Ok(json!({
        "labels": labels,
        "ops": trace.len(),
        "truthful": truthful.to_string(),
        "sent": z.to_string(),
        "outcome": outcome,
    }))
}

/// Generates a hard batch partial sum trace and plays the verification game at `split`.
///
/// `corrupt` is empty for the truthful message, or one of `flip:k`, `truncate:k`, `extend:k`.
#[wasm_bindgen]
pub fn comm_game(k: usize, b: u64, p: u64, seed: u64, split: &str, corrupt: &str) -> String {
    respond(comm_game_impl(k, b, p, seed, split, corrupt))
}
