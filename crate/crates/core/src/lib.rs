//! Exact-arithmetic invariants of plumbed 3-manifolds.
//!
//! The crate takes a plumbing diagram (a weighted tree describing a graph
//! manifold that is a rational homology sphere) and computes, with no
//! floating point anywhere:
//!
//! * its splice diagram in normalized, unnormalized and maximal form,
//! * edge determinants, orbifold Euler characteristics, rational Euler
//!   numbers, fiber pairings and linking numbers,
//! * the decomposition graph and its reduced plumbing matrix,
//! * a singularity-link verdict established along three independent routes,
//! * the combinatorial plan of the universal abelian cover: splitting the
//!   diagram along a torus, ideal generators, covering degrees and cover
//!   Euler numbers, down to Brieskorn and connected-sum base cases.
//!
//! The `plumb` binary exposes the same pipeline on the command line and the
//! companion `graphsplice-py` crate exposes it to Python.

pub mod cli;
pub mod cover;
pub mod exact;
pub mod fixtures;
pub mod invariants;
pub mod plumbing;
pub mod singularity;
pub mod splice;

/// Crate-wide error type.
///
/// `Input` covers malformed files, violated preconditions and unsupported
/// diagram shapes; `Inconsistency` flags a disagreement between redundant
/// computation routes and always indicates a bug, never bad input. The
/// command-line driver maps them to exit codes 1 and 2 respectively.
#[derive(thiserror::Error, Debug)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("internal cross-check disagreement: {0}")]
    Inconsistency(String),
}
