//! Minimal inertia pairs of signed multigraphs.
//!
//! A signed graph describes a class of real symmetric matrices through the
//! signs its entries may take. This crate computes the minimal partial
//! inertias `(p, q)` over that class exactly: graphs with a cut vertex are
//! split recursively with a four-term decomposition, small blocks are
//! searched directly, and every congruence transform used along the way is
//! checked by exact rational arithmetic.

pub mod decomposition;
pub mod error;
pub mod graph;
pub mod lemmas;
pub mod matrix;
pub mod oracle;
pub mod pairs;
pub mod transforms;

pub use error::{Error, Result};
pub use graph::{EdgeProfile, Parity, Separation, SignedGraph};
pub use matrix::{InertiaPair, Matrix, Rat, SymMat};
pub use pairs::PairSet;
pub use decomposition::{
    formula_minimal, minimum_rank, verify_equivalence, witness_for_pair, Evaluator, Provenance, SeparationTree,
};
pub use lemmas::check_lemmas;
pub use oracle::{oracle_inertia, OracleConfig, OracleReport};
