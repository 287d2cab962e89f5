use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use super::DyadicLabel;
use crate::probe::{Addr, ProbeLog};
use crate::{Error, Result};

/// Per-label counts for a split `I_{s0} | I_{s1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelAudit {
    pub s: String,
    pub size_p0: usize,
    pub size_p1: usize,
    pub intersection: usize,
    /// Probes in `I_{s1}` whose cell was last probed in `I_{s0}`.
    pub referrals: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub b: u32,
    pub num_ops: usize,
    pub total_probes: usize,
    pub labels: Vec<LabelAudit>,
    /// `sum_s |P_{s0}| + |P_{s1}|`.
    pub sum_sizes: usize,
    /// `T * b`.
    pub size_bound: usize,
    pub total_referrals: usize,
    pub sizes_within_bound: bool,
    pub referrals_within_bound: bool,
    pub referrals_match_intersections: bool,
}

impl AuditReport {
    pub fn holds(&self) -> bool {
        self.sizes_within_bound && self.referrals_within_bound && self.referrals_match_intersections
    }
}

/// Audits a probe log of a `2B`-operation hard sequence, `B = 2^b`, where
/// operation `2t` is `U_t` and `2t + 1` is `Q_t`.
pub fn counting_audit(log: &ProbeLog, b: u32) -> Result<AuditReport> {
    if b > 30 {
        return Err(Error::Config(format!("b = {b} is too large to audit")));
    }
    let big_b = 1usize << b;
    let num_ops = 2 * big_b;
    if let Some(last) = log.last_op() {
        if last >= num_ops {
            return Err(Error::Shape(format!(
                "log reaches operation {last} but a sequence with B = {big_b} has {num_ops} operations"
            )));
        }
    }

    let mut referrals: Vec<Vec<usize>> = (0..b).map(|d| vec![0; 1 << d]).collect();
    let mut last_t: FxHashMap<Addr, usize> = FxHashMap::default();
    for rec in log.entries() {
        let t = rec.op_index / 2;
        if let Some(prev) = last_t.insert(rec.address, t) {
            if prev != t {
                let depth = b - 1 - (prev ^ t).ilog2();
                referrals[depth as usize][t >> (b - depth)] += 1;
            }
        }
    }

    let mut labels = Vec::with_capacity(big_b.saturating_sub(1));
    let (mut sum_sizes, mut total_referrals) = (0, 0);
    let mut matches = true;
    for label in DyadicLabel::all(b) {
        let p0: FxHashSet<Addr> = log.slice(label.left_ops()).iter().map(|r| r.address).collect();
        let p1: FxHashSet<Addr> = log.slice(label.right_ops()).iter().map(|r| r.address).collect();
        let (small, large) = if p0.len() <= p1.len() { (&p0, &p1) } else { (&p1, &p0) };
        let intersection = small.iter().filter(|a| large.contains(a)).count();
        let depth = label.len();
        let refs = referrals[depth][(label.t_range().start >> (b as usize - depth)) as usize];
        matches &= refs == intersection;
        sum_sizes += p0.len() + p1.len();
        total_referrals += refs;
        labels.push(LabelAudit {
            s: label.to_string(),
            size_p0: p0.len(),
            size_p1: p1.len(),
            intersection,
            referrals: refs,
        });
    }
    let total_probes = log.len();
    let size_bound = total_probes * b as usize;
    Ok(AuditReport {
        b,
        num_ops,
        total_probes,
        labels,
        sum_sizes,
        size_bound,
        total_referrals,
        sizes_within_bound: sum_sizes <= size_bound,
        referrals_within_bound: total_referrals <= total_probes,
        referrals_match_intersections: matches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probe::{ProbeKind, ProbeRecord};

    fn log_of(pairs: &[(usize, Addr)]) -> ProbeLog {
        ProbeLog::from_records(
            pairs
                .iter()
                .map(|&(op_index, address)| ProbeRecord { op_index, kind: ProbeKind::Read, address })
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn one_cell_every_op() {
        let b = 3;
        let pairs: Vec<_> = (0..16).map(|o| (o, 7)).collect();
        let r = counting_audit(&log_of(&pairs), b).unwrap();
        assert_eq!(r.labels.len(), 7);
        assert!(r.labels.iter().all(|l| l.referrals == 1 && l.intersection == 1));
        assert_eq!(r.total_referrals, 7);
        assert_eq!(r.total_probes, 16);
        assert!(r.holds());
    }

    #[test]
    fn referral_lands_at_common_prefix() {
        // t = 1 (001) and t = 6 (110) share the empty prefix
        let r = counting_audit(&log_of(&[(2, 5), (13, 5), (13, 5)]), 3).unwrap();
        assert_eq!(r.labels[0].s, "");
        assert_eq!(r.labels[0].referrals, 1);
        assert_eq!(r.total_referrals, 1);
        assert!(r.holds());
    }

    #[test]
    fn rejects_overlong_log() {
        assert!(matches!(counting_audit(&log_of(&[(8, 1)]), 2), Err(Error::Shape(_))));
    }
}
