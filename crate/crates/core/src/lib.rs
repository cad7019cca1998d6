//! Schatten p-norms and the super-operator norms they induce.
//!
//! The crate computes `||Phi||_{q->p}`, its Hermitian-restricted variant and
//! the stabilized (identity-tensored) versions of both, including the diamond
//! norm, for super-operators given in generalized Kraus form. Every norm is
//! computed by a multi-restart local search and returned together with a
//! witness operator, so each value is a certified lower bound.
//!
//! The [`suite`] module runs numerical checks of the structural facts about
//! these norms (Hermitian achievers for completely positive maps, stability
//! under tensoring with the identity, and the explicit counterexamples).

pub mod cli;
pub mod error;
pub mod matrix;
pub mod norm_opt;
pub mod schatten;
pub mod suite;
pub mod superop;

pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, SpectralData, C64};
pub use norm_opt::{NormEstimate, NormQuery, OptimizerConfig};
pub use schatten::SchattenExponent;
pub use superop::SuperOp;
