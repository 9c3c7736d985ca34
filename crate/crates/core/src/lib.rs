//! Solvers and analysis for the test set problem with redundancy.
//!
//! Given `n` items and a collection of tests (subsets of the items), an
//! `r`-test set is a subfamily of tests such that every unordered pair of
//! items is differentiated (exactly one item inside the test) by at least
//! `r` distinct chosen tests. The crate provides:
//!
//! * [`model`]: instances, item pairs, solutions and the incremental
//!   differentiation state.
//! * [`sga`]: the set-cover greedy algorithm with a recorded trace.
//! * [`multicover`]: the reduction to constrained set multicover and an
//!   independent greedy multicover solver used as a cross-check.
//! * [`exact`]: an exact branch-and-bound oracle for the optimum size.
//! * [`analysis`]: approximation bounds, the potential-function trace and
//!   per-instance bound reports.
//! * [`generators`]: seeded random and string-barcoding instances.
//! * [`sweep`]: batch experiments producing CSV tables.

pub mod analysis;
pub mod error;
pub mod exact;
pub mod generators;
pub mod model;
pub mod multicover;
pub mod sga;
pub mod sweep;

pub use error::{Error, Result};
pub use model::{DifferentiationState, Instance, ItemPair, Solution};
