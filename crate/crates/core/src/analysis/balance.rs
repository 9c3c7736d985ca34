//! Balancing the two ratio bounds over the unknown optimum size.
//!
//! For fixed `n` and `r`, `ρ₁` falls as `m*` grows while `ρ₂` (with `#_B`
//! replaced by the exactly-`r` bound, capped at `#₀`) does not fall, so
//! `min(ρ₁, ρ₂)` peaks where the two cross.

use serde::Serialize;

use super::bounds::{lemma1_bound, rho1, rho2, theorem_leading};
use crate::error::{Error, Result};
use crate::model::pair_count;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremReport {
    pub n: usize,
    pub r: u32,
    /// `(2 − 1/(2r))·ln n + 1.5·ln r`, excluding the `O(ln ln n)` term.
    pub leading: f64,
    /// `max_{m*} min(ρ₁, ρ₂)` over integer `m*` in `[1, r(n−1)]`.
    pub max_min: f64,
    pub argmax_m_star: usize,
    pub note: &'static str,
}

const NOTE: &str = "leading excludes an additive O(ln ln n) term with unspecified constant";

/// `ρ₂` at `m*` with `#_B` replaced by `min(2n·log₂n·m*^(r−1), #₀)`.
pub fn rho2_capped(n: usize, m_star: usize, r: u32) -> f64 {
    let hash_0 = u64::from(r) * pair_count(n) as u64;
    let cap = lemma1_bound(n, m_star, r).min(hash_0 as f64);
    rho2(hash_0, cap, r).expect("cap is at least 1 for n >= 2")
}

/// `min(ρ₁, ρ₂)` at `m*`.
pub fn min_rho(n: usize, m_star: usize, r: u32) -> f64 {
    let hash_0 = u64::from(r) * pair_count(n) as u64;
    rho1(hash_0, m_star).min(rho2_capped(n, m_star, r))
}

/// Largest `m*` considered: a minimal `r`-test set never exceeds `r(n−1)`.
pub fn m_star_range(n: usize, r: u32) -> usize {
    r as usize * (n - 1)
}

pub fn theorem_ratio_expr(n: usize, r: u32) -> Result<TheoremReport> {
    if n < 3 || r < 1 {
        return Err(Error::InvalidInstance {
            field: "n".into(),
            reason: format!("ratio expression needs n >= 3 and r >= 1, got n={n}, r={r}"),
        });
    }
    let hash_0 = u64::from(r) * pair_count(n) as u64;
    let hi = m_star_range(n, r);
    let gap = |m: usize| rho1(hash_0, m) - rho2_capped(n, m, r);

    // first m with ρ₁ ≤ ρ₂; gap is strictly decreasing
    let (mut lo, mut up) = (1usize, hi + 1);
    while lo < up {
        let mid = lo + (up - lo) / 2;
        if gap(mid) <= 0.0 {
            up = mid;
        } else {
            lo = mid + 1;
        }
    }
    let mut best: Option<(usize, f64)> = None;
    for m in [lo.saturating_sub(1), lo] {
        if (1..=hi).contains(&m) {
            let v = min_rho(n, m, r);
            if best.is_none_or(|(_, b)| v > b) {
                best = Some((m, v));
            }
        }
    }
    let (argmax_m_star, max_min) = best.expect("range is nonempty");
    Ok(TheoremReport {
        n,
        r,
        leading: theorem_leading(n, r),
        max_min,
        argmax_m_star,
        note: NOTE,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leading_for_r1() {
        let rep = theorem_ratio_expr(16, 1).unwrap();
        assert!((rep.leading - 1.5 * 16f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn n16_r1_is_rho1_at_one() {
        // ρ₂ is flat for r=1 and exceeds ρ₁(1), so the peak sits at m*=1
        let rep = theorem_ratio_expr(16, 1).unwrap();
        assert_eq!(rep.argmax_m_star, 1);
        assert!((rep.max_min - (120f64.ln() + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn search_matches_scan_small() {
        for n in 3..40 {
            for r in 1..5 {
                let rep = theorem_ratio_expr(n, r).unwrap();
                let scan = (1..=m_star_range(n, r))
                    .map(|m| min_rho(n, m, r))
                    .fold(f64::NEG_INFINITY, f64::max);
                assert!((rep.max_min - scan).abs() < 1e-12, "n={n} r={r}");
            }
        }
    }

    #[test]
    fn rejects_small_n() {
        assert!(theorem_ratio_expr(2, 1).is_err());
    }
}
