//! Batch experiments over seeded random instances.
//!
//! Every `(n, t, r, seed index)` cell draws random instances until one is
//! feasible and free of complementary tests (or `max_attempts` runs out, in
//! which case the cell yields no row). The seed of the accepted draw is
//! recorded. Cells are processed in parallel but reported in cell order.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::{full_report, BoundsReport, CheckStatus, ReportOptions};
use crate::error::Result;
use crate::generators::gen_random;
use crate::model::Instance;

pub const CSV_HEADER: [&str; 12] = [
    "n",
    "t",
    "r",
    "seed",
    "m_star",
    "sga_size",
    "ratio",
    "rho1",
    "hash_b",
    "lemma1_bound",
    "lemma2_size_bound",
    "assertions_passed",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub n_values: Vec<usize>,
    pub t_values: Vec<usize>,
    pub r_values: Vec<u32>,
    pub p: f64,
    pub seeds: usize,
    pub base_seed: u64,
    pub oracle_budget: Option<u64>,
    pub skip_oracle: bool,
    pub max_attempts: usize,
    pub enumerate_optima_max_n: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            n_values: (4..=8).collect(),
            t_values: vec![10],
            r_values: vec![1, 2, 3],
            p: 0.5,
            seeds: 10,
            base_seed: 0,
            oracle_budget: Some(10_000_000),
            skip_oracle: false,
            max_attempts: 1000,
            enumerate_optima_max_n: 5,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepEntry {
    pub n: usize,
    pub t: usize,
    pub r: u32,
    pub seed: u64,
    pub instance: Instance,
    pub report: Result<BoundsReport, String>,
}

impl SweepEntry {
    pub fn status(&self) -> String {
        match &self.report {
            Ok(rep) => rep.overall().as_str().to_string(),
            Err(e) => format!("error: {e}"),
        }
    }
}

fn mix(mut z: u64) -> u64 {
    // splitmix64 finalizer
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for one draw of one cell.
pub fn cell_seed(base: u64, n: usize, t: usize, r: u32, index: usize, attempt: usize) -> u64 {
    [
        n as u64,
        t as u64,
        u64::from(r),
        index as u64,
        attempt as u64,
    ]
    .into_iter()
    .fold(mix(base), |h, v| mix(h ^ v))
}

/// First feasible, complement-free random instance for a cell.
pub fn draw_instance(
    config: &SweepConfig,
    n: usize,
    t: usize,
    r: u32,
    index: usize,
) -> Result<Option<(u64, Instance)>> {
    for attempt in 0..config.max_attempts {
        let seed = cell_seed(config.base_seed, n, t, r, index, attempt);
        let inst = gen_random(n, t, config.p, r, seed)?;
        if inst.is_feasible() && inst.validate_no_complements().is_empty() {
            return Ok(Some((seed, inst)));
        }
    }
    Ok(None)
}

pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepEntry>> {
    let mut cells = Vec::new();
    for &n in &config.n_values {
        for &t in &config.t_values {
            for &r in &config.r_values {
                for s in 0..config.seeds {
                    cells.push((n, t, r, s));
                }
            }
        }
    }
    let options = ReportOptions {
        oracle_budget: config.oracle_budget,
        skip_oracle: config.skip_oracle,
        enumerate_optima_max_n: config.enumerate_optima_max_n,
    };
    let entries: Vec<Option<SweepEntry>> = cells
        .par_iter()
        .map(|&(n, t, r, s)| -> Result<Option<SweepEntry>> {
            let Some((seed, instance)) = draw_instance(config, n, t, r, s)? else {
                return Ok(None);
            };
            let report = full_report(&instance, &options).map_err(|e| e.to_string());
            Ok(Some(SweepEntry {
                n,
                t,
                r,
                seed,
                instance,
                report,
            }))
        })
        .collect::<Result<_>>()?;
    Ok(entries.into_iter().flatten().collect())
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// CSV table: one row per entry, then one summary row per `(n, r)` with the
/// largest observed ratio (`seed` column reads `summary`).
pub fn write_csv<W: Write>(entries: &[SweepEntry], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for e in entries {
        let rep = e.report.as_ref().ok();
        let sga = rep.map(|r| r.sga_size);
        w.write_record([
            e.n.to_string(),
            e.t.to_string(),
            e.r.to_string(),
            e.seed.to_string(),
            opt(rep.and_then(|r| r.m_star)),
            opt(sga),
            opt(rep.and_then(|r| r.ratio)),
            opt(rep.and_then(|r| r.rho1)),
            opt(rep.and_then(|r| r.hash_b)),
            opt(rep.and_then(|r| r.lemma1_bound)),
            opt(rep.and_then(|r| r.lemma2_size_bound)),
            e.status(),
        ])?;
    }

    let mut cells: Vec<(usize, u32)> = Vec::new();
    for e in entries {
        if !cells.contains(&(e.n, e.r)) {
            cells.push((e.n, e.r));
        }
    }
    for (n, r) in cells {
        let group: Vec<&SweepEntry> = entries.iter().filter(|e| e.n == n && e.r == r).collect();
        let max_ratio = group
            .iter()
            .filter_map(|e| e.report.as_ref().ok().and_then(|r| r.ratio))
            .fold(None, |acc: Option<f64>, x| {
                Some(acc.map_or(x, |a| a.max(x)))
            });
        let status = if group.iter().any(|e| match &e.report {
            Ok(rep) => rep.overall() == CheckStatus::Fail,
            Err(_) => true,
        }) {
            "fail"
        } else if group
            .iter()
            .any(|e| matches!(&e.report, Ok(rep) if rep.overall() == CheckStatus::Pass))
        {
            "pass"
        } else {
            "skip"
        };
        w.write_record([
            n.to_string(),
            String::new(),
            r.to_string(),
            "summary".to_string(),
            String::new(),
            String::new(),
            opt(max_ratio),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            status.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn sweep_csv(config: &SweepConfig) -> Result<String> {
    let entries = run_sweep(config)?;
    let mut buf = Vec::new();
    write_csv(&entries, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv is utf-8"))
}
