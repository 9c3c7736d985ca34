//! Closed-form bounds on the greedy solution size.
//!
//! Natural logarithms throughout, except the `log₂ n` factor of the
//! exactly-`r` pair bound.

use crate::error::{Error, Result};

/// `ρ₁ = ln #₀ − ln m* + 1`.
pub fn rho1(hash_0: u64, m_star: usize) -> f64 {
    (hash_0 as f64).ln() - (m_star as f64).ln() + 1.0
}

/// Upper bound `2·n·log₂ n·m*^(r−1)` on the number of pairs an optimal
/// `r`-test set differentiates exactly `r` times.
pub fn lemma1_bound(n: usize, m_star: usize, r: u32) -> f64 {
    2.0 * n as f64 * (n as f64).log2() * (m_star as f64).powi(r as i32 - 1)
}

/// `ρ₂ = ln #₀ − ln(#₀/#_B)/(r+1) + r/(r+1)·ln(r+1) + 1`.
///
/// `hash_b` is real-valued so the capped form (with the exactly-`r` bound in
/// place of a measured count) can be evaluated too.
pub fn rho2(hash_0: u64, hash_b: f64, r: u32) -> Result<f64> {
    if hash_b < 1.0 || hash_b.is_nan() {
        return Err(Error::ZeroHashB);
    }
    let h0 = hash_0 as f64;
    let r1 = f64::from(r) + 1.0;
    Ok(h0.ln() - (h0 / hash_b).ln() / r1 + f64::from(r) / r1 * r1.ln() + 1.0)
}

/// Size bound `ρ₂·m* + 1` for the greedy solution given the measured `#_B`.
pub fn lemma2_size_bound(hash_0: u64, hash_b: u64, m_star: usize, r: u32) -> Result<f64> {
    Ok(rho2(hash_0, hash_b as f64, r)? * m_star as f64 + 1.0)
}

/// Step threshold `k = r/(r+1)·ln((r+1)·#₀/#_B)·m*`.
pub fn k_threshold(hash_0: u64, hash_b: u64, m_star: usize, r: u32) -> Result<f64> {
    if hash_b == 0 {
        return Err(Error::ZeroHashB);
    }
    let r1 = f64::from(r) + 1.0;
    Ok(f64::from(r) / r1 * (r1 * hash_0 as f64 / hash_b as f64).ln() * m_star as f64)
}

/// Base `1 − (r+1)/(r·m*)` of the potential's discount factor.
pub fn potential_base(m_star: usize, r: u32) -> Result<f64> {
    // m* > (r+1)/r  <=>  r·m* > r+1
    if (r as usize) * m_star <= r as usize + 1 {
        return Err(Error::Degenerate { m_star, r });
    }
    Ok(1.0 - (f64::from(r) + 1.0) / (f64::from(r) * m_star as f64))
}

/// `f = (# − r/(r+1)·#_B)·(1 − (r+1)/(r·m*))^(k − steps)`.
pub fn potential(
    measure: u64,
    hash_b: u64,
    m_star: usize,
    r: u32,
    k: f64,
    steps_taken: usize,
) -> Result<f64> {
    let base = potential_base(m_star, r)?;
    let r = f64::from(r);
    let shifted = measure as f64 - r / (r + 1.0) * hash_b as f64;
    Ok(shifted * base.powf(k - steps_taken as f64))
}

/// Leading part `(2 − 1/(2r))·ln n + (3/2)·ln r` of the improved ratio; the
/// additive `O(ln ln n)` term has no explicit constant and is left out.
pub fn theorem_leading(n: usize, r: u32) -> f64 {
    let r = f64::from(r);
    (2.0 - 1.0 / (2.0 * r)) * (n as f64).ln() + 1.5 * r.ln()
}
