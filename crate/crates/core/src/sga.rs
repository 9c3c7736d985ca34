//! Set-cover greedy algorithm (SGA).
//!
//! Each iteration picks the unpicked test minimizing `#(𝒯̄ ∪ {T})`, i.e.
//! maximizing the residual delta `#(T, 𝒯̄)`, until the measure reaches zero.
//!
//! Deltas only shrink as the selection grows, so cached deltas are upper
//! bounds. Candidates sit in a max-heap keyed by `(cached delta, priority)`;
//! the top entry is re-evaluated and committed only once its fresh key still
//! dominates every cached key.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{DifferentiationState, Instance, Solution};

/// How ties between equal-delta tests are resolved.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum TieBreak {
    #[default]
    LowestIndex,
    /// Ties resolved by a seeded random permutation of the test indices.
    Seeded(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SgaStep {
    pub test: usize,
    pub measure_before: u64,
    pub measure_after: u64,
}

impl SgaStep {
    pub fn delta(&self) -> u64 {
        self.measure_before - self.measure_after
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SgaTrace {
    pub steps: Vec<SgaStep>,
    pub solution: Solution,
}

impl SgaTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `#(𝒯̄_t)` for `t = 0..=len`.
    pub fn measures(&self, initial: u64) -> Vec<u64> {
        std::iter::once(initial)
            .chain(self.steps.iter().map(|s| s.measure_after))
            .collect()
    }

    /// Step records as JSON.
    pub fn steps_json(&self) -> String {
        serde_json::to_string(&self.steps).expect("steps serialize")
    }

    /// Rebuild a trace from exported step records.
    pub fn from_steps_json(text: &str, instance: &Instance) -> Result<Self> {
        let steps: Vec<SgaStep> = serde_json::from_str(text)?;
        let mut state = DifferentiationState::new(instance);
        for s in &steps {
            let before = state.measure();
            let delta = state.apply_test(s.test)?;
            if before != s.measure_before || before - delta != s.measure_after {
                return Err(Error::InvalidSolution(format!(
                    "trace step for test {} does not match the instance",
                    s.test
                )));
            }
        }
        let solution = Solution::new(steps.iter().map(|s| s.test).collect(), instance)?;
        Ok(Self { steps, solution })
    }
}

/// `#(T, 𝒯̄)` for an unpicked test.
pub fn greedy_delta(state: &DifferentiationState<'_>, test: usize) -> u64 {
    state.delta(test)
}

pub fn run_sga(instance: &Instance) -> Result<SgaTrace> {
    run_sga_with(instance, TieBreak::LowestIndex)
}

pub fn run_sga_with(instance: &Instance, tie_break: TieBreak) -> Result<SgaTrace> {
    let t = instance.num_tests();
    // lower rank wins ties
    let rank: Vec<usize> = match tie_break {
        TieBreak::LowestIndex => (0..t).collect(),
        TieBreak::Seeded(seed) => {
            let mut order: Vec<usize> = (0..t).collect();
            order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            let mut rank = vec![0; t];
            for (pos, &test) in order.iter().enumerate() {
                rank[test] = pos;
            }
            rank
        }
    };

    let mut state = DifferentiationState::new(instance);
    let mut heap: BinaryHeap<(u64, Reverse<usize>, usize)> = (0..t)
        .map(|j| (state.delta(j), Reverse(rank[j]), j))
        .collect();
    let mut steps = Vec::new();

    while state.measure() > 0 {
        let chosen = loop {
            let Some((cached, prio, test)) = heap.pop() else {
                return Err(Error::Infeasible(format!(
                    "all tests used with residual measure {}",
                    state.measure()
                )));
            };
            let fresh = state.delta(test);
            if fresh == cached {
                break (fresh, test);
            }
            heap.push((fresh, prio, test));
        };
        let (delta, test) = chosen;
        if delta == 0 {
            return Err(Error::Infeasible(format!(
                "no remaining test reduces residual measure {}",
                state.measure()
            )));
        }
        let before = state.measure();
        state.apply_test(test)?;
        steps.push(SgaStep {
            test,
            measure_before: before,
            measure_after: state.measure(),
        });
    }

    let solution = Solution::from_picks(steps.iter().map(|s| s.test).collect());
    Ok(SgaTrace { steps, solution })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::is_r_test_set;

    fn singletons(n: usize, r: u32) -> Instance {
        Instance::new(n, r, (0..n).map(|i| vec![i]).collect()).unwrap()
    }

    #[test]
    fn two_items_one_test() {
        let i = Instance::new(2, 1, vec![vec![0]]).unwrap();
        let trace = run_sga(&i).unwrap();
        assert_eq!(trace.solution.picks(), &[0]);
        assert_eq!(
            trace.steps,
            vec![SgaStep {
                test: 0,
                measure_before: 1,
                measure_after: 0
            }]
        );
    }

    #[test]
    fn singletons_r1() {
        let i = singletons(4, 1);
        let trace = run_sga(&i).unwrap();
        assert_eq!(trace.solution.picks(), &[0, 1, 2]);
        assert_eq!(trace.measures(i.initial_measure()), vec![6, 3, 1, 0]);
        assert!(is_r_test_set(&trace.solution, &i));
    }

    #[test]
    fn singletons_r2_forces_all() {
        let i = singletons(4, 2);
        let trace = run_sga(&i).unwrap();
        assert_eq!(trace.solution.picks(), &[0, 1, 2, 3]);
    }

    #[test]
    fn delta_examples() {
        let i = Instance::new(3, 1, vec![vec![0]]).unwrap();
        assert_eq!(greedy_delta(&DifferentiationState::new(&i), 0), 2);
        let i = Instance::new(3, 2, vec![vec![0]]).unwrap();
        assert_eq!(greedy_delta(&DifferentiationState::new(&i), 0), 2);

        let i = Instance::new(3, 1, vec![vec![0], vec![1], vec![2], vec![0, 1]]).unwrap();
        let mut s = DifferentiationState::new(&i);
        s.apply_test(0).unwrap();
        s.apply_test(1).unwrap();
        assert_eq!(s.measure(), 0);
        for j in 2..4 {
            assert_eq!(greedy_delta(&s, j), 0);
        }
    }

    #[test]
    fn infeasible_is_an_error() {
        let i = Instance::new(3, 1, vec![vec![0, 1]]).unwrap();
        assert!(matches!(run_sga(&i), Err(Error::Infeasible(_))));
        let i = Instance::new(2, 1, vec![]).unwrap();
        assert!(matches!(run_sga(&i), Err(Error::Infeasible(_))));
        let i = Instance::new(3, 2, vec![vec![0], vec![1], vec![]]).unwrap();
        assert!(matches!(run_sga(&i), Err(Error::Infeasible(_))));
    }

    #[test]
    fn seeded_tie_break_is_reproducible() {
        let i = singletons(6, 1);
        let a = run_sga_with(&i, TieBreak::Seeded(9)).unwrap();
        let b = run_sga_with(&i, TieBreak::Seeded(9)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 5);
        assert!(is_r_test_set(&a.solution, &i));
    }

    #[test]
    fn trace_json_round_trip() {
        let i = singletons(4, 1);
        let trace = run_sga(&i).unwrap();
        let json = trace.steps_json();
        assert!(json.starts_with(r#"[{"test":0,"measure_before":6,"measure_after":3}"#));
        assert_eq!(SgaTrace::from_steps_json(&json, &i).unwrap(), trace);
        let forged = json.replace("\"measure_after\":3", "\"measure_after\":2");
        assert!(SgaTrace::from_steps_json(&forged, &i).is_err());
    }
}
