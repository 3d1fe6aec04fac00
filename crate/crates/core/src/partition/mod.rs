//! Block decompositions of the lattice, the explicit constants of the
//! block-factorization bounds, and a ledger checking each inequality on
//! concrete instances.

mod blocks;
mod constants;
mod geometry;
mod ledger;

pub use blocks::{build_partition, slab_count, Partition, PartitionCheck, PartitionKind};
pub use constants::{
    constants_for, derivation_csv, evaluate, lemma_constants, replay_derivation_csv, solvable_constants, Derivation,
    LemmaConstants,
};
pub use geometry::{ball_constant, beta_r};
pub use ledger::*;
