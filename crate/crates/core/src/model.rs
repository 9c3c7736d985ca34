//! Instance model and differentiation semantics.
//!
//! Items are the ids `0..n`. A test differentiates the pair `{i, j}` when
//! exactly one of `i`, `j` belongs to it. Pairs are addressed through a
//! fixed linearization so per-pair state fits in a flat array.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of unordered item pairs over `n` items.
pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Unordered pair of distinct items, stored with `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ItemPair {
    i: usize,
    j: usize,
}

impl ItemPair {
    /// Canonical pair for two distinct items, in either order.
    pub fn new(a: usize, b: usize) -> Option<Self> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Some(Self { i: a, j: b }),
            std::cmp::Ordering::Greater => Some(Self { i: b, j: a }),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn j(&self) -> usize {
        self.j
    }

    /// Flat index `i·n − i(i+1)/2 + (j−i−1)`.
    pub fn index(&self, n: usize) -> usize {
        debug_assert!(self.j < n);
        self.i * n - self.i * (self.i + 1) / 2 + (self.j - self.i - 1)
    }

    /// Inverse of [`ItemPair::index`].
    pub fn from_index(n: usize, mut index: usize) -> Self {
        let mut i = 0;
        loop {
            let row = n - i - 1;
            if index < row {
                return Self {
                    i,
                    j: i + 1 + index,
                };
            }
            index -= row;
            i += 1;
        }
    }

    /// All pairs over `n` items in index order.
    pub fn all(n: usize) -> impl Iterator<Item = ItemPair> {
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| ItemPair { i, j }))
    }
}

/// Whether `test` (a sorted item list) differentiates `pair`.
pub fn differentiates(test: &[usize], pair: ItemPair) -> bool {
    test.binary_search(&pair.i).is_ok() != test.binary_search(&pair.j).is_ok()
}

#[derive(Serialize, Deserialize)]
struct RawInstance {
    n: usize,
    r: u32,
    tests: Vec<Vec<usize>>,
}

/// Items `0..n`, an indexed collection of tests and the redundancy `r`.
///
/// Immutable once built. Each test is stored sorted and deduplicated, along
/// with a membership mask for O(1) lookups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawInstance", into = "RawInstance")]
pub struct Instance {
    n: usize,
    r: u32,
    tests: Vec<Vec<usize>>,
    masks: Vec<Vec<bool>>,
}

impl TryFrom<RawInstance> for Instance {
    type Error = Error;

    fn try_from(raw: RawInstance) -> Result<Self> {
        Instance::new(raw.n, raw.r, raw.tests)
    }
}

impl From<Instance> for RawInstance {
    fn from(inst: Instance) -> Self {
        RawInstance {
            n: inst.n,
            r: inst.r,
            tests: inst.tests,
        }
    }
}

impl Instance {
    pub fn new(n: usize, r: u32, tests: Vec<Vec<usize>>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInstance {
                field: "n".into(),
                reason: format!("need at least 2 items, got {n}"),
            });
        }
        if r < 1 {
            return Err(Error::InvalidInstance {
                field: "r".into(),
                reason: "redundancy must be at least 1".into(),
            });
        }
        let mut masks = Vec::with_capacity(tests.len());
        let mut normalized = Vec::with_capacity(tests.len());
        for (t, mut test) in tests.into_iter().enumerate() {
            if let Some((pos, &item)) = test.iter().enumerate().find(|(_, &x)| x >= n) {
                return Err(Error::InvalidInstance {
                    field: format!("tests[{t}][{pos}]"),
                    reason: format!("item {item} out of range 0..{n}"),
                });
            }
            test.sort_unstable();
            test.dedup();
            let mut mask = vec![false; n];
            for &x in &test {
                mask[x] = true;
            }
            masks.push(mask);
            normalized.push(test);
        }
        Ok(Self {
            n,
            r,
            tests: normalized,
            masks,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instance serializes")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn num_tests(&self) -> usize {
        self.tests.len()
    }

    pub fn num_pairs(&self) -> usize {
        pair_count(self.n)
    }

    pub fn tests(&self) -> &[Vec<usize>] {
        &self.tests
    }

    pub fn test(&self, index: usize) -> &[usize] {
        &self.tests[index]
    }

    /// Same items and tests under a different redundancy.
    pub fn with_r(&self, r: u32) -> Result<Self> {
        Self::new(self.n, r, self.tests.clone())
    }

    /// Same items and redundancy with one extra test appended.
    pub fn with_extra_test(&self, test: Vec<usize>) -> Result<Self> {
        let mut tests = self.tests.clone();
        tests.push(test);
        Self::new(self.n, self.r, tests)
    }

    pub fn contains(&self, test: usize, item: usize) -> bool {
        self.masks[test][item]
    }

    pub fn differentiates(&self, test: usize, pair: ItemPair) -> bool {
        let mask = &self.masks[test];
        mask[pair.i] != mask[pair.j]
    }

    /// Flat indices of every pair differentiated by `test`.
    pub fn differentiated_pairs(&self, test: usize) -> impl Iterator<Item = usize> + '_ {
        let n = self.n;
        let mask = &self.masks[test];
        self.tests[test].iter().flat_map(move |&i| {
            (0..n)
                .filter(move |&j| !mask[j])
                .map(move |j| ItemPair::new(i, j).expect("distinct").index(n))
        })
    }

    /// `#₀ = r·n(n−1)/2`.
    pub fn initial_measure(&self) -> u64 {
        u64::from(self.r) * self.num_pairs() as u64
    }

    /// Whether the whole test collection is an `r`-test set.
    pub fn is_feasible(&self) -> bool {
        let all = Solution {
            picks: (0..self.num_tests()).collect(),
        };
        is_r_test_set(&all, self)
    }

    /// All `(j, k)`, `j < k`, with test `j` equal to the complement of test `k`.
    pub fn validate_no_complements(&self) -> Vec<(usize, usize)> {
        let mut found = Vec::new();
        for j in 0..self.num_tests() {
            for k in j + 1..self.num_tests() {
                if self.tests[j].len() + self.tests[k].len() == self.n
                    && self.masks[j]
                        .iter()
                        .zip(&self.masks[k])
                        .all(|(a, b)| a != b)
                {
                    found.push((j, k));
                }
            }
        }
        found
    }
}

/// Ordered selection of distinct test indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Solution {
    picks: Vec<usize>,
}

impl Solution {
    pub fn new(picks: Vec<usize>, instance: &Instance) -> Result<Self> {
        let mut seen = vec![false; instance.num_tests()];
        for &p in &picks {
            if p >= instance.num_tests() {
                return Err(Error::TestOutOfRange {
                    index: p,
                    count: instance.num_tests(),
                });
            }
            if std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidSolution(format!("test {p} picked twice")));
            }
        }
        Ok(Self { picks })
    }

    pub(crate) fn from_picks(picks: Vec<usize>) -> Self {
        Self { picks }
    }

    pub fn picks(&self) -> &[usize] {
        &self.picks
    }

    pub fn len(&self) -> usize {
        self.picks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.picks.is_empty()
    }

    /// Picks in increasing index order.
    pub fn sorted(&self) -> Vec<usize> {
        let mut v = self.picks.clone();
        v.sort_unstable();
        v
    }
}

/// `⊥(a, picks)`: how many picked tests differentiate `pair`.
pub fn perp_count(pair: ItemPair, picks: &Solution, instance: &Instance) -> usize {
    picks
        .picks
        .iter()
        .filter(|&&t| instance.differentiates(t, pair))
        .count()
}

/// `⊥(a, picks)` for every pair, by flat index.
pub fn perp_counts(picks: &Solution, instance: &Instance) -> Vec<u32> {
    let mut counts = vec![0u32; instance.num_pairs()];
    for &t in &picks.picks {
        for p in instance.differentiated_pairs(t) {
            counts[p] += 1;
        }
    }
    counts
}

pub fn is_r_test_set(picks: &Solution, instance: &Instance) -> bool {
    let r = instance.r();
    perp_counts(picks, instance).iter().all(|&c| c >= r)
}

/// Per-pair differentiation counts and the residual measure
/// `#(𝒯̄) = Σ_a max(r − ⊥(a,𝒯̄), 0)` under an incrementally grown selection.
///
/// Counts are exact (uncapped); only the measure saturates at `r`.
#[derive(Debug, Clone)]
pub struct DifferentiationState<'a> {
    instance: &'a Instance,
    counts: Vec<u32>,
    applied: Vec<bool>,
    measure: u64,
    steps: usize,
}

impl<'a> DifferentiationState<'a> {
    pub fn new(instance: &'a Instance) -> Self {
        Self {
            instance,
            counts: vec![0; instance.num_pairs()],
            applied: vec![false; instance.num_tests()],
            measure: instance.initial_measure(),
            steps: 0,
        }
    }

    pub fn instance(&self) -> &'a Instance {
        self.instance
    }

    pub fn measure(&self) -> u64 {
        self.measure
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn count(&self, pair: ItemPair) -> u32 {
        self.counts[pair.index(self.instance.n())]
    }

    pub fn is_applied(&self, test: usize) -> bool {
        self.applied[test]
    }

    /// Number of tests applied so far.
    pub fn steps(&self) -> usize {
        self.steps
    }

    /// `#(T, 𝒯̄)`: demand units test `test` would satisfy.
    pub fn delta(&self, test: usize) -> u64 {
        let r = self.instance.r();
        self.instance
            .differentiated_pairs(test)
            .filter(|&p| self.counts[p] < r)
            .count() as u64
    }

    /// Add `test` to the selection and return the measure decrease.
    pub fn apply_test(&mut self, test: usize) -> Result<u64> {
        if test >= self.applied.len() {
            return Err(Error::TestOutOfRange {
                index: test,
                count: self.applied.len(),
            });
        }
        if self.applied[test] {
            return Err(Error::DuplicateTest(test));
        }
        self.applied[test] = true;
        let r = self.instance.r();
        let mut delta = 0u64;
        for p in self.instance.differentiated_pairs(test) {
            if self.counts[p] < r {
                delta += 1;
            }
            self.counts[p] += 1;
        }
        self.measure -= delta;
        self.steps += 1;
        Ok(delta)
    }

    /// Measure recomputed from the counts.
    pub fn recompute_measure(&self) -> u64 {
        let r = self.instance.r();
        self.counts
            .iter()
            .map(|&c| u64::from(r.saturating_sub(c)))
            .sum()
    }
}
