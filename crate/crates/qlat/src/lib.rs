//! Exact-arithmetic toolkit for positive definite integral lattices.
//!
//! The crate provides:
//!
//! - exact rational linear algebra and the [`Lattice`] value type with its
//!   basic invariants (scale, discriminant, dual, discriminant group);
//! - complete short-vector enumeration up to a bound, minima, roots, and
//!   represented-integer tables ([`shortvec`]);
//! - root lattices, glue vectors, the one-generator glue construction, the
//!   named lattices built from it, and a primitive-overlattice classifier
//!   ([`construct`]);
//! - representation (embedding) search, primitivity and isometry tests,
//!   orthogonal decomposition, sum-of-squares tests, and
//!   additive-indecomposability certificates ([`morphisms`]);
//! - enumeration of small-rank integral lattices up to isometry and truncated
//!   exceptional sets ([`catalog`]);
//! - a registry of machine-checkable claims with a pass/fail report
//!   ([`claims`]).
//!
//! All lattice arithmetic is exact. Floating point appears only as a pruning
//! heuristic inside enumeration, and every candidate it suggests is
//! re-verified in exact rational arithmetic before being reported.

pub mod catalog;
pub mod claims;
pub mod construct;
pub mod error;
pub mod lattice;
pub mod lll;
pub mod mat;
pub mod morphisms;
pub mod rat;
pub mod shortvec;

pub use error::{Error, Result};
pub use lattice::{
    discriminant, discriminant_group, dual, is_even, is_integral, lattice_from_json,
    lattice_to_json, make_lattice, orthogonal_sum, scale, Ambient, DiscriminantGroup, Lattice,
};
pub use mat::{IntMat, RatMat};
pub use rat::Rat;

/// Node budgets for enumeration and embedding search.
///
/// Exceeding a budget is an explicit error, never a silent truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Max nodes visited by one short-vector enumeration.
    pub enumeration_nodes: u64,
    /// Max candidate placements examined by one embedding search.
    pub search_nodes: u64,
}

pub const DEFAULT_BUDGET: u64 = 100_000_000;

impl Default for Limits {
    fn default() -> Self {
        Limits {
            enumeration_nodes: DEFAULT_BUDGET,
            search_nodes: DEFAULT_BUDGET,
        }
    }
}

impl Limits {
    pub fn with_budget(nodes: u64) -> Self {
        Limits {
            enumeration_nodes: nodes,
            search_nodes: nodes,
        }
    }
}
