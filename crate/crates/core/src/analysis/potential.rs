//! Potential function evaluated along a greedy run.
//!
//! With `#_B` taken from an optimal witness, the run splits into a prefix
//! `𝒯₁` (every state up to the last one whose measure is still `≥ #_B`),
//! the test `T̃` that drops the measure below `#_B`, and the remainder `𝒯₂`.

use serde::Serialize;

use super::bounds::{k_threshold, lemma2_size_bound, potential, potential_base};
use crate::error::{Error, Result};
use crate::exact::OptimalCertificate;
use crate::model::Instance;
use crate::sga::SgaTrace;

/// Relative slack for comparing potential values computed in floating point.
const REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RunSplit {
    /// `|𝒯₁|`.
    pub prefix: usize,
    /// Test index of `T̃`.
    pub crossing_test: usize,
    /// `|𝒯₂|`.
    pub suffix: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PotentialChecks {
    /// `f` never increases from one step to the next.
    pub monotone: bool,
    /// `f(∅) < #_B/(r+1)`.
    pub initial_below: bool,
    /// `f(𝒯₁) ≤ f(∅)`.
    pub prefix_below_initial: bool,
    /// `|𝒯₁| < k`.
    pub prefix_below_k: bool,
    /// Run length within the size bound.
    pub size_within_bound: bool,
}

impl PotentialChecks {
    pub fn all_hold(&self) -> bool {
        self.monotone
            && self.initial_below
            && self.prefix_below_initial
            && self.prefix_below_k
            && self.size_within_bound
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PotentialTrace {
    pub k: f64,
    pub base: f64,
    pub hash_b: u64,
    pub f_values: Vec<f64>,
    pub split: RunSplit,
    pub size_bound: f64,
    pub checks: PotentialChecks,
    /// First step `t` with `f(t+1) > f(t)`, if any.
    pub first_increase: Option<usize>,
}

fn leq(a: f64, b: f64) -> bool {
    a <= b + REL_TOL * a.abs().max(b.abs()).max(1.0)
}

/// Potential along `trace` against the certificate's `#_B`.
pub fn trace_potential(
    trace: &SgaTrace,
    certificate: &OptimalCertificate,
    instance: &Instance,
) -> Result<PotentialTrace> {
    trace_potential_with(
        trace,
        certificate.m_star,
        certificate.hash_b as u64,
        instance,
    )
}

/// Same as [`trace_potential`] for an arbitrary optimal `#_B` (the
/// statistic depends on which optimum is chosen).
pub fn trace_potential_with(
    trace: &SgaTrace,
    m_star: usize,
    hash_b: u64,
    instance: &Instance,
) -> Result<PotentialTrace> {
    let r = instance.r();
    let base = potential_base(m_star, r)?;
    if hash_b == 0 {
        return Err(Error::ZeroHashB);
    }
    let hash_0 = instance.initial_measure();
    let k = k_threshold(hash_0, hash_b, m_star, r)?;
    let measures = trace.measures(hash_0);

    let f_values = measures
        .iter()
        .enumerate()
        .map(|(t, &m)| potential(m, hash_b, m_star, r, k, t))
        .collect::<Result<Vec<_>>>()?;

    let prefix = measures
        .iter()
        .rposition(|&m| m >= hash_b)
        .expect("#₀ ≥ #_B");
    if prefix >= trace.len() {
        return Err(Error::InvalidSolution(
            "trace does not drive the measure below #_B".into(),
        ));
    }
    let split = RunSplit {
        prefix,
        crossing_test: trace.steps[prefix].test,
        suffix: trace.len() - prefix - 1,
    };

    let first_increase = f_values.windows(2).position(|w| !leq(w[1], w[0]));
    let size_bound = lemma2_size_bound(hash_0, hash_b, m_star, r)?;
    let checks = PotentialChecks {
        monotone: first_increase.is_none(),
        initial_below: f_values[0] < hash_b as f64 / (f64::from(r) + 1.0),
        prefix_below_initial: leq(f_values[prefix], f_values[0]),
        prefix_below_k: (prefix as f64) < k,
        size_within_bound: trace.len() as f64 <= size_bound,
    };

    Ok(PotentialTrace {
        k,
        base,
        hash_b,
        f_values,
        split,
        size_bound,
        checks,
        first_increase,
    })
}
