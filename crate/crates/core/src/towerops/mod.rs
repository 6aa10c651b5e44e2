//! Executable verifiers for the tower-level calculus. Each returns a
//! [`Report`](crate::report::Report) holding both sides of every identity.

pub mod chains;
pub mod compat;
pub mod compression;
pub mod cumulants;
pub mod ladders;
pub mod levels;
pub mod lift;

pub use chains::{verify_chain_compression, verify_chain_tower};
pub use compat::verify_compatibility;
pub use compression::verify_compression;
pub use cumulants::{
    cumulant_expansion, level_cumulant, scalar_tower_cumulant, trivial_expansion, verify_lemma_e, ExpansionTerm,
};
pub use ladders::{ladder_expectation, verify_ladder, verify_ladder_compression};
pub use levels::{verify_amalgamated_levels, verify_scalar_levels, LayeredSpec};
pub use lift::{lift_family, lift_scalar_cumulants, verify_lift, verify_lifted_freeness};
