//! Per-instance bound report.

use serde::{Deserialize, Serialize};

use super::bounds::{lemma1_bound, lemma2_size_bound, rho1, rho2, theorem_leading};
use super::potential::{trace_potential_with, PotentialTrace};
use crate::error::{Error, Result};
use crate::exact::{all_optima, ceil_log2, count_exactly_r, solve_exact, ExactOutcome};
use crate::model::Instance;
use crate::sga::run_sga;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skip,
}

impl CheckStatus {
    fn from_bool(ok: bool) -> Self {
        if ok {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Skip => "skip",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

/// An optimal witness with more exactly-`r` pairs than the closed-form bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma1Violation {
    pub witness: Vec<usize>,
    pub exactly_r: usize,
    pub bound: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReportOptions {
    /// Search-node limit for the exact oracle; `None` is unlimited.
    pub oracle_budget: Option<u64>,
    pub skip_oracle: bool,
    /// Enumerate every optimum when `n` is at most this.
    pub enumerate_optima_max_n: usize,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            oracle_budget: Some(10_000_000),
            skip_oracle: false,
            enumerate_optima_max_n: 5,
        }
    }
}

pub const CHECK_NAMES: [&str; 12] = [
    "size_facts",
    "sga_at_least_optimum",
    "rho1",
    "lemma2",
    "lemma2_min_hash_b",
    "ratio_within_min_rho",
    "lemma1",
    "lemma1_all_optima",
    "potential_monotone",
    "potential_initial",
    "prefix_below_k",
    "potential_size",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsReport {
    pub n: usize,
    pub t: usize,
    pub r: u32,
    pub hash_0: u64,
    pub sga_size: usize,
    pub m_star: Option<usize>,
    pub witness: Option<Vec<usize>>,
    pub hash_b: Option<usize>,
    /// Smallest `#_B` over all optima, when they were enumerated.
    pub min_hash_b: Option<usize>,
    pub optima_count: Option<usize>,
    pub rho1: Option<f64>,
    pub rho2: Option<f64>,
    pub lemma1_bound: Option<f64>,
    pub lemma2_size_bound: Option<f64>,
    pub theorem_expr: f64,
    pub ratio: Option<f64>,
    pub complements: Vec<(usize, usize)>,
    pub potential: Option<PotentialTrace>,
    pub lemma1_violations: Vec<Lemma1Violation>,
    pub checks: Vec<Check>,
}

impl BoundsReport {
    pub fn check(&self, name: &str) -> Option<CheckStatus> {
        self.checks
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.status)
    }

    /// `fail` if any check failed, `pass` if at least one passed, else `skip`.
    pub fn overall(&self) -> CheckStatus {
        if self.checks.iter().any(|c| c.status == CheckStatus::Fail) {
            CheckStatus::Fail
        } else if self.checks.iter().any(|c| c.status == CheckStatus::Pass) {
            CheckStatus::Pass
        } else {
            CheckStatus::Skip
        }
    }

    pub fn certified(&self) -> bool {
        self.m_star.is_some()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

struct Checks(Vec<Check>);

impl Checks {
    fn push(&mut self, name: &'static str, status: CheckStatus, detail: impl Into<String>) {
        self.0.push(Check {
            name,
            status,
            detail: detail.into(),
        });
    }

    fn assert(&mut self, name: &'static str, ok: bool, detail: impl Into<String>) {
        let detail = if ok { String::new() } else { detail.into() };
        self.push(name, CheckStatus::from_bool(ok), detail);
    }

    fn skip_all(&mut self, reason: &str) {
        for name in CHECK_NAMES {
            if !self.0.iter().any(|c| c.name == name) {
                self.push(name, CheckStatus::Skip, reason);
            }
        }
    }
}

/// Run SGA and (unless skipped) the exact oracle, then evaluate every bound.
///
/// Bound assertions are skipped when the oracle cannot certify `m*` or when
/// the instance contains complementary tests.
pub fn full_report(instance: &Instance, options: &ReportOptions) -> Result<BoundsReport> {
    let trace = run_sga(instance)?;
    let n = instance.n();
    let r = instance.r();
    let hash_0 = instance.initial_measure();
    let sga_size = trace.len();

    let mut report = BoundsReport {
        n,
        t: instance.num_tests(),
        r,
        hash_0,
        sga_size,
        m_star: None,
        witness: None,
        hash_b: None,
        min_hash_b: None,
        optima_count: None,
        rho1: None,
        rho2: None,
        lemma1_bound: None,
        lemma2_size_bound: None,
        theorem_expr: theorem_leading(n, r),
        ratio: None,
        complements: instance.validate_no_complements(),
        potential: None,
        lemma1_violations: Vec::new(),
        checks: Vec::new(),
    };
    let mut checks = Checks(Vec::new());

    let outcome = if options.skip_oracle {
        None
    } else {
        Some(solve_exact(instance, options.oracle_budget)?)
    };
    let cert = match outcome {
        Some(ExactOutcome::Optimal(c)) => c,
        Some(ExactOutcome::Unknown { nodes, .. }) => {
            checks.skip_all(&format!("oracle budget exhausted after {nodes} nodes"));
            report.checks = checks.0;
            return Ok(report);
        }
        None => {
            checks.skip_all("oracle skipped");
            report.checks = checks.0;
            return Ok(report);
        }
    };

    let m = cert.m_star;
    let hb = cert.hash_b;
    let r1 = rho1(hash_0, m);
    let r2 = rho2(hash_0, hb as f64, r)?;
    let l1 = lemma1_bound(n, m, r);
    let l2 = lemma2_size_bound(hash_0, hb as u64, m, r)?;
    report.m_star = Some(m);
    report.witness = Some(cert.witness.picks().to_vec());
    report.hash_b = Some(hb);
    report.rho1 = Some(r1);
    report.rho2 = Some(r2);
    report.lemma1_bound = Some(l1);
    report.lemma2_size_bound = Some(l2);
    report.ratio = Some(sga_size as f64 / m as f64);

    let sga = sga_size as f64;
    checks.assert(
        "size_facts",
        ceil_log2(n) <= m && m <= r as usize * (n - 1),
        format!(
            "m*={m} outside [{}, {}]",
            ceil_log2(n),
            r as usize * (n - 1)
        ),
    );
    checks.assert(
        "sga_at_least_optimum",
        sga_size >= m,
        format!("sga {sga_size} < m* {m}"),
    );

    if !report.complements.is_empty() {
        checks.skip_all("complementary tests present");
        report.checks = checks.0;
        return Ok(report);
    }

    checks.assert(
        "rho1",
        sga <= r1 * m as f64,
        format!("sga {sga_size} > {}", r1 * m as f64),
    );
    checks.assert("lemma2", sga <= l2, format!("sga {sga_size} > {l2}"));
    let min_bound = (r1 * m as f64).min(r2 * m as f64 + 1.0);
    checks.assert(
        "ratio_within_min_rho",
        sga <= min_bound,
        format!("sga {sga_size} > {min_bound}"),
    );
    checks.assert("lemma1", hb as f64 <= l1, format!("#_B {hb} > {l1}"));

    let optima = if n <= options.enumerate_optima_max_n {
        all_optima(instance, m, options.oracle_budget)?
    } else {
        None
    };
    match optima {
        Some(optima) => {
            let mut min_hb = usize::MAX;
            for sol in &optima {
                let count = count_exactly_r(sol, instance)?;
                min_hb = min_hb.min(count);
                if count as f64 > l1 {
                    report.lemma1_violations.push(Lemma1Violation {
                        witness: sol.picks().to_vec(),
                        exactly_r: count,
                        bound: l1,
                    });
                }
            }
            report.optima_count = Some(optima.len());
            report.min_hash_b = Some(min_hb);
            checks.assert(
                "lemma1_all_optima",
                report.lemma1_violations.is_empty(),
                format!(
                    "{} optimal witnesses exceed the bound",
                    report.lemma1_violations.len()
                ),
            );
            let l2_min = lemma2_size_bound(hash_0, min_hb as u64, m, r)?;
            checks.assert(
                "lemma2_min_hash_b",
                sga <= l2_min,
                format!("sga {sga_size} > {l2_min} with #_B={min_hb}"),
            );
        }
        None => {
            checks.push(
                "lemma1_all_optima",
                CheckStatus::Skip,
                "optima not enumerated",
            );
            checks.push(
                "lemma2_min_hash_b",
                CheckStatus::Skip,
                "optima not enumerated",
            );
        }
    }

    match trace_potential_with(&trace, m, hb as u64, instance) {
        Ok(p) => {
            let detail = format!("k={:.6}, split={:?}", p.k, p.split);
            checks.assert(
                "potential_monotone",
                p.checks.monotone && p.checks.prefix_below_initial,
                format!("f increases at step {:?}", p.first_increase),
            );
            checks.assert(
                "potential_initial",
                p.checks.initial_below,
                format!("f(∅)={} ≥ #_B/(r+1)", p.f_values[0]),
            );
            checks.assert("prefix_below_k", p.checks.prefix_below_k, detail);
            checks.assert(
                "potential_size",
                p.checks.size_within_bound,
                format!("sga {sga_size} > {}", p.size_bound),
            );
            report.potential = Some(p);
        }
        Err(Error::Degenerate { m_star, r }) => {
            checks.skip_all(&format!("degenerate potential base (m*={m_star}, r={r})"));
        }
        Err(e) => return Err(e),
    }

    report.checks = checks.0;
    Ok(report)
}
