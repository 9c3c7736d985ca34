//! Reproducible instance generators.

use std::collections::{BTreeSet, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Instance;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GenSpec {
    /// `t` tests over `n` items, each item included independently with
    /// probability `p`.
    Random {
        n: usize,
        t: usize,
        p: f64,
        r: u32,
        seed: u64,
    },
    /// Tests are the distinct substrings of `sequences` with length in
    /// `[min_len, max_len]`; a substring's test is the set of sequences
    /// containing it.
    Barcode {
        sequences: Vec<String>,
        min_len: usize,
        max_len: usize,
        r: u32,
    },
}

impl GenSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn generate(&self) -> Result<Instance> {
        match self {
            GenSpec::Random { n, t, p, r, seed } => gen_random(*n, *t, *p, *r, *seed),
            GenSpec::Barcode {
                sequences,
                min_len,
                max_len,
                r,
            } => gen_barcode(sequences, *min_len, *max_len, *r),
        }
    }
}

/// Random instance; feasibility is not guaranteed.
pub fn gen_random(n: usize, t: usize, p: f64, r: u32, seed: u64) -> Result<Instance> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidSpec(format!("p must lie in (0, 1), got {p}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tests = (0..t)
        .map(|_| (0..n).filter(|_| rng.gen_bool(p)).collect())
        .collect();
    Instance::new(n, r, tests)
}

/// Barcoding instance from contiguous substrings.
///
/// Candidates are visited by (length, lexicographic) order. Tests hitting no
/// sequence or every sequence are dropped, and later candidates with an
/// item set already seen are discarded. Identical input sequences yield an
/// infeasible instance rather than an error.
pub fn gen_barcode(
    sequences: &[String],
    min_len: usize,
    max_len: usize,
    r: u32,
) -> Result<Instance> {
    if sequences.len() < 2 {
        return Err(Error::InvalidSpec(format!(
            "need at least 2 sequences, got {}",
            sequences.len()
        )));
    }
    if min_len == 0 || min_len > max_len {
        return Err(Error::InvalidSpec(format!(
            "invalid substring length range [{min_len}, {max_len}]"
        )));
    }
    let chars: Vec<Vec<char>> = sequences.iter().map(|s| s.chars().collect()).collect();
    let n = sequences.len();

    let mut tests = Vec::new();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    for len in min_len..=max_len {
        let candidates: BTreeSet<&[char]> = chars.iter().flat_map(|s| s.windows(len)).collect();
        for sub in candidates {
            let items: Vec<usize> = chars
                .iter()
                .enumerate()
                .filter(|(_, s)| s.windows(len).any(|w| w == sub))
                .map(|(i, _)| i)
                .collect();
            if items.is_empty() || items.len() == n {
                continue;
            }
            if seen.insert(items.clone()) {
                tests.push(items);
            }
        }
    }
    Instance::new(n, r, tests)
}
