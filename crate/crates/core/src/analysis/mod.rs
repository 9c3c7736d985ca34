//! Approximation bounds for the greedy algorithm and their empirical checks.

pub mod balance;
pub mod bounds;
pub mod potential;
pub mod report;

pub use balance::{min_rho, rho2_capped, theorem_ratio_expr, TheoremReport};
pub use bounds::{
    k_threshold, lemma1_bound, lemma2_size_bound, potential, potential_base, rho1, rho2,
    theorem_leading,
};
pub use potential::{trace_potential, trace_potential_with, PotentialTrace, RunSplit};
pub use report::{full_report, BoundsReport, Check, CheckStatus, ReportOptions};
