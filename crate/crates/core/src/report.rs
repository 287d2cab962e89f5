//! Probe statistics as CSV and the probe-scaling measurement.

use std::collections::BTreeMap;
use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::comm_game::GameOutcome;
use crate::probe::{CellMemory, ProbeLog};
use crate::structures::{run_ops, SegmentTree};
use crate::trace::Op;
use crate::workload::random_interval_ops;
use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KindStats {
    pub op_kind: String,
    pub count: usize,
    pub total_probes: usize,
    pub mean_probes: f64,
    pub max_probes: usize,
}

/// Rows `(op_index, op_kind, probes)` for every operation of the trace.
pub fn write_per_op_csv<W: Write>(ops: &[Op], log: &ProbeLog, out: W) -> Result<()> {
    let counts = log.per_op_counts(ops.len());
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["op_index", "op_kind", "probes"]).map_err(std::io::Error::from)?;
    for (i, (op, c)) in ops.iter().zip(counts).enumerate() {
        w.serialize((i, op.kind(), c)).map_err(std::io::Error::from)?;
    }
    w.flush()?;
    Ok(())
}

/// Probe totals per operation kind, in order of first appearance.
pub fn aggregate(ops: &[Op], log: &ProbeLog) -> Vec<KindStats> {
    let counts = log.per_op_counts(ops.len());
    let mut order: Vec<&'static str> = Vec::new();
    let mut by_kind: BTreeMap<&'static str, (usize, usize, usize)> = BTreeMap::new();
    for (op, c) in ops.iter().zip(counts) {
        let e = by_kind.entry(op.kind()).or_insert_with(|| {
            order.push(op.kind());
            (0, 0, 0)
        });
        e.0 += 1;
        e.1 += c;
        e.2 = e.2.max(c);
    }
    order
        .into_iter()
        .map(|k| {
            let (count, total, max) = by_kind[k];
            KindStats {
                op_kind: k.into(),
                count,
                total_probes: total,
                mean_probes: total as f64 / count as f64,
                max_probes: max,
            }
        })
        .collect()
}

pub fn write_aggregate_csv<W: Write>(stats: &[KindStats], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["op_kind", "count", "total_probes", "mean_probes", "max_probes"])
        .map_err(std::io::Error::from)?;
    for s in stats {
        w.serialize((&s.op_kind, s.count, s.total_probes, s.mean_probes, s.max_probes))
            .map_err(std::io::Error::from)?;
    }
    w.flush()?;
    Ok(())
}

/// One row per game: the ledger parts next to the cost bound.
pub fn write_game_csv<W: Write>(games: &[GameOutcome], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "split",
        "verdict",
        "merlin_bits",
        "alice_bob_bits",
        "disjointness_bits",
        "total",
        "size_pa",
        "size_pb",
        "size_intersection",
        "word_size",
        "c",
        "bound",
    ])
    .map_err(std::io::Error::from)?;
    for g in games {
        let verdict = if g.accepted() { "accept" } else { "reject" };
        w.serialize((
            &g.split,
            verdict,
            g.ledger.merlin_bits,
            g.ledger.alice_bob_bits,
            g.ledger.disjointness_bits,
            g.ledger.total,
            g.size_pa,
            g.size_pb,
            g.size_intersection,
            g.word_size,
            g.c,
            g.bound,
        ))
        .map_err(std::io::Error::from)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingPoint {
    pub n: u64,
    pub log2_n: f64,
    pub updates: usize,
    pub mean_update_probes: f64,
    pub max_update_probes: usize,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub points: Vec<ScalingPoint>,
    /// Least-squares slope of mean update probes against `log2 n`.
    pub slope: f64,
    pub monotone: bool,
}

/// Mean segment-tree probes per insert/delete on random traces of `ops_per_n` operations.
pub fn probe_scaling(ns: &[u64], ops_per_n: usize, seed: u64) -> Result<ScalingReport> {
    let mut points = Vec::with_capacity(ns.len());
    for (i, &n) in ns.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
        let ops = random_interval_ops(n, ops_per_n, &mut rng);
        let tree = SegmentTree::new(n, 64, 0)?;
        let mut mem = CellMemory::with_default_word_size();
        run_ops(&tree, &mut mem, &ops, 0..ops.len())?;
        let counts = mem.log().per_op_counts(ops.len());
        let upd: Vec<usize> = ops
            .iter()
            .zip(&counts)
            .filter(|(op, _)| !op.is_query())
            .map(|(_, &c)| c)
            .collect();
        points.push(ScalingPoint {
            n,
            log2_n: (n as f64).log2(),
            updates: upd.len(),
            mean_update_probes: upd.iter().sum::<usize>() as f64 / upd.len().max(1) as f64,
            max_update_probes: upd.iter().copied().max().unwrap_or(0),
            bound: tree.probe_bounds().update_bound(n),
        });
    }
    let xs: Vec<f64> = points.iter().map(|p| p.log2_n).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.mean_update_probes).collect();
    let monotone = ys.windows(2).all(|w| w[0] <= w[1]);
    Ok(ScalingReport { slope: least_squares_slope(&xs, &ys), points, monotone })
}

pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return 0.0;
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_run_writes_headers_only() {
        let mut buf = Vec::new();
        write_per_op_csv(&[], &ProbeLog::new(), &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "op_index,op_kind,probes\n");
        let mut buf = Vec::new();
        write_aggregate_csv(&aggregate(&[], &ProbeLog::new()), &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 1);
    }

    #[test]
    fn scaling_grows_with_log_n() {
        let r = probe_scaling(&[1 << 6, 1 << 8, 1 << 10], 400, 7).unwrap();
        assert!(r.monotone);
        assert!(r.slope > 0.0);
        assert!(r.points.iter().all(|p| p.max_update_probes as f64 <= p.bound));
    }

    #[test]
    fn slope_of_line() {
        assert!((least_squares_slope(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]) - 2.0).abs() < 1e-12);
    }
}
