//! Simulation of the Merlin-assisted two-party game on a split `I_A | I_B`
//! of a hard sequence, with exact bit accounting, and the zero-error sparse
//! set disjointness protocol it finishes with.

mod disjointness;
mod game;

pub use disjointness::{elias_gamma_len, sparse_set_disjointness, DisjointnessResult};
pub use game::{
    build_merlin_message, run_game, Corruption, CostLedger, GameInstance, GameOutcome,
    MerlinMessage, Verdict, COST_CONSTANT,
};
