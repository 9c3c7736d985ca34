//! Exact oracle for the optimum `r`-test set size.
//!
//! Iterative deepening over the solution size `k`, starting from
//! `max(⌈log₂ n⌉, ⌈#₀ / max delta⌉)`. For each `k` a depth-first search
//! enumerates index-increasing selections, so the first hit is the
//! lexicographically smallest optimum. Branches are cut when the best
//! `remaining` candidate deltas cannot absorb the residual measure, which
//! subsumes the single-best-delta test `measure > remaining · max delta`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{is_r_test_set, perp_counts, Instance, Solution};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OptimalCertificate {
    pub m_star: usize,
    pub witness: Solution,
    pub hash_b: usize,
}

impl OptimalCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExactOutcome {
    Optimal(OptimalCertificate),
    /// Node budget ran out; every size below `lower_bound` is proven infeasible.
    Unknown {
        nodes: u64,
        lower_bound: usize,
    },
}

impl ExactOutcome {
    pub fn certificate(&self) -> Option<&OptimalCertificate> {
        match self {
            ExactOutcome::Optimal(c) => Some(c),
            ExactOutcome::Unknown { .. } => None,
        }
    }
}

/// `⌈log₂ n⌉`.
pub fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// Number of pairs differentiated by exactly `r` picked tests.
pub fn count_exactly_r(picks: &Solution, instance: &Instance) -> Result<usize> {
    let counts = perp_counts(picks, instance);
    let r = instance.r();
    if counts.iter().any(|&c| c < r) {
        return Err(Error::NotRTestSet);
    }
    Ok(counts.iter().filter(|&&c| c == r).count())
}

struct BudgetExhausted;

enum Mode {
    First,
    All,
}

struct Search<'a> {
    r: u32,
    num_tests: usize,
    pairs: Vec<Vec<usize>>,
    counts: Vec<u32>,
    measure: u64,
    chosen: Vec<usize>,
    found: Vec<Vec<usize>>,
    nodes: u64,
    budget: Option<u64>,
    mode: Mode,
    _instance: &'a Instance,
}

impl<'a> Search<'a> {
    fn new(instance: &'a Instance, budget: Option<u64>, mode: Mode) -> Self {
        let pairs = (0..instance.num_tests())
            .map(|t| instance.differentiated_pairs(t).collect())
            .collect();
        Self {
            r: instance.r(),
            num_tests: instance.num_tests(),
            pairs,
            counts: vec![0; instance.num_pairs()],
            measure: instance.initial_measure(),
            chosen: Vec::new(),
            found: Vec::new(),
            nodes: 0,
            budget,
            mode,
            _instance: instance,
        }
    }

    fn delta(&self, test: usize) -> u64 {
        self.pairs[test]
            .iter()
            .filter(|&&p| self.counts[p] < self.r)
            .count() as u64
    }

    fn apply(&mut self, test: usize) {
        for &p in &self.pairs[test] {
            if self.counts[p] < self.r {
                self.measure -= 1;
            }
            self.counts[p] += 1;
        }
        self.chosen.push(test);
    }

    fn undo(&mut self, test: usize) {
        for &p in &self.pairs[test] {
            self.counts[p] -= 1;
            if self.counts[p] < self.r {
                self.measure += 1;
            }
        }
        self.chosen.pop();
    }

    /// Returns `Ok(true)` when the search should stop (first solution found).
    fn dfs(&mut self, start: usize, remaining: usize) -> Result<bool, BudgetExhausted> {
        self.nodes += 1;
        if self.budget.is_some_and(|b| self.nodes > b) {
            return Err(BudgetExhausted);
        }
        if self.measure == 0 {
            self.found.push(self.chosen.clone());
            return Ok(matches!(self.mode, Mode::First));
        }
        if remaining == 0 || self.num_tests - start < remaining {
            return Ok(false);
        }

        let deltas: Vec<u64> = (start..self.num_tests).map(|j| self.delta(j)).collect();
        let max_delta = deltas.iter().copied().max().unwrap_or(0);
        if self.measure > remaining as u64 * max_delta {
            return Ok(false);
        }
        let mut sorted = deltas.clone();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        if sorted.iter().take(remaining).sum::<u64>() < self.measure {
            return Ok(false);
        }

        for j in start..=self.num_tests - remaining {
            // a zero-delta pick is redundant, so it never appears in a minimum solution
            if deltas[j - start] == 0 {
                continue;
            }
            self.apply(j);
            let stop = self.dfs(j + 1, remaining - 1);
            self.undo(j);
            if stop? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

fn initial_lower_bound(instance: &Instance) -> usize {
    let max_delta = instance
        .tests()
        .iter()
        .map(|t| (t.len() * (instance.n() - t.len())) as u64)
        .max()
        .unwrap_or(0)
        .min(instance.num_pairs() as u64);
    let by_measure = if max_delta == 0 {
        0
    } else {
        instance.initial_measure().div_ceil(max_delta) as usize
    };
    ceil_log2(instance.n()).max(by_measure)
}

/// Certified optimum, or [`ExactOutcome::Unknown`] when `budget` search
/// nodes are not enough. `None` means no node limit.
pub fn solve_exact(instance: &Instance, budget: Option<u64>) -> Result<ExactOutcome> {
    if !instance.is_feasible() {
        return Err(Error::Infeasible(
            "the full test collection is not an r-test set".into(),
        ));
    }
    let mut search = Search::new(instance, budget, Mode::First);
    let mut k = initial_lower_bound(instance);
    loop {
        match search.dfs(0, k) {
            Err(BudgetExhausted) => {
                return Ok(ExactOutcome::Unknown {
                    nodes: search.nodes,
                    lower_bound: k,
                })
            }
            Ok(true) => break,
            Ok(false) => {
                k += 1;
                debug_assert!(
                    k <= instance.num_tests(),
                    "feasible instance has a solution"
                );
            }
        }
    }
    let picks = search.found.pop().expect("search stopped on a solution");
    let witness = Solution::new(picks, instance)?;
    let hash_b = count_exactly_r(&witness, instance)?;
    Ok(ExactOutcome::Optimal(OptimalCertificate {
        m_star: witness.len(),
        witness,
        hash_b,
    }))
}

/// Every `r`-test set of size `m_star`, in lexicographic order. Meaningful
/// when `m_star` is the certified optimum. `None` if the budget runs out.
pub fn all_optima(
    instance: &Instance,
    m_star: usize,
    budget: Option<u64>,
) -> Result<Option<Vec<Solution>>> {
    let mut search = Search::new(instance, budget, Mode::All);
    if search.dfs(0, m_star).is_err() {
        return Ok(None);
    }
    let sols = search
        .found
        .into_iter()
        .filter(|p| p.len() == m_star)
        .map(|p| Solution::new(p, instance))
        .collect::<Result<Vec<_>>>()?;
    debug_assert!(sols.iter().all(|s| is_r_test_set(s, instance)));
    Ok(Some(sols))
}
