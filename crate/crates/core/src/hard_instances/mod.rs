//! The hard batch-partial-sum distribution, its interval-union image, the
//! dyadic split family and the probe-counting audit.

mod audit;
mod dist;
mod label;

pub use audit::{counting_audit, AuditReport, LabelAudit};
pub use dist::{gen_hard_bps, gen_hard_diu, solve_diu_params, HardDiuInstance, HardDistParams};
pub use label::{bit_reverse, DyadicLabel};
