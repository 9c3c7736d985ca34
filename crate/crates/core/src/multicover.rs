//! Reduction to constrained set multicover.
//!
//! The universe is the set of item pairs (flat pair indices); each test `T`
//! maps to `c(T) = {{i,j} : i ∈ T, j ∉ T}`. A selection is an `r`-test set
//! iff the corresponding subsets cover every element at least `r` times.
//!
//! The greedy solver here shares no selection code with [`crate::sga`]; it
//! keeps its own residual-demand array and rescans every subset per step.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{pair_count, Instance, Solution};
use crate::sga::run_sga;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MulticoverInstance {
    #[serde(rename = "N")]
    pub universe_size: usize,
    #[serde(rename = "r")]
    pub coverage: u32,
    pub subsets: Vec<Vec<usize>>,
}

impl MulticoverInstance {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("multicover instance serializes")
    }

    /// Multiplicity with which `selection` covers each element.
    pub fn coverage_counts(&self, selection: &[usize]) -> Vec<u32> {
        let mut counts = vec![0u32; self.universe_size];
        for &s in selection {
            for &e in &self.subsets[s] {
                counts[e] += 1;
            }
        }
        counts
    }

    /// Whether `selection` covers every element at least `r` times.
    pub fn is_r_cover(&self, selection: &[usize]) -> bool {
        self.coverage_counts(selection)
            .iter()
            .all(|&c| c >= self.coverage)
    }
}

pub fn reduce(instance: &Instance) -> MulticoverInstance {
    let subsets = (0..instance.num_tests())
        .map(|t| {
            let mut elems: Vec<usize> = instance.differentiated_pairs(t).collect();
            elems.sort_unstable();
            elems
        })
        .collect();
    MulticoverInstance {
        universe_size: pair_count(instance.n()),
        coverage: instance.r(),
        subsets,
    }
}

/// Greedy multicover: repeatedly take the unused subset covering the most
/// outstanding demand, lowest index on ties.
pub fn greedy_multicover(mc: &MulticoverInstance) -> Result<Vec<usize>> {
    let mut demand = vec![mc.coverage; mc.universe_size];
    let mut outstanding: u64 = u64::from(mc.coverage) * mc.universe_size as u64;
    let mut used = vec![false; mc.subsets.len()];
    let mut picks = Vec::new();

    while outstanding > 0 {
        let mut best: Option<(usize, u64)> = None;
        for (s, subset) in mc.subsets.iter().enumerate() {
            if used[s] {
                continue;
            }
            let gain = subset.iter().filter(|&&e| demand[e] > 0).count() as u64;
            if best.is_none_or(|(_, g)| gain > g) {
                best = Some((s, gain));
            }
        }
        match best {
            Some((s, gain)) if gain > 0 => {
                used[s] = true;
                for &e in &mc.subsets[s] {
                    if demand[e] > 0 {
                        demand[e] -= 1;
                    }
                }
                outstanding -= gain;
                picks.push(s);
            }
            _ => {
                return Err(Error::Infeasible(format!(
                    "multicover demand {outstanding} cannot be met"
                )))
            }
        }
    }
    Ok(picks)
}

/// Whether SGA and the greedy multicover solver pick the same tests in the
/// same order. Both failing as infeasible also counts as agreement.
pub fn verify_equivalence(instance: &Instance) -> bool {
    let sga = run_sga(instance);
    let mc = greedy_multicover(&reduce(instance));
    match (sga, mc) {
        (Ok(trace), Ok(picks)) => trace.solution.picks() == picks.as_slice(),
        (Err(Error::Infeasible(_)), Err(Error::Infeasible(_))) => true,
        _ => false,
    }
}

/// Convenience: greedy multicover on the reduction, as a [`Solution`].
pub fn solve_via_multicover(instance: &Instance) -> Result<Solution> {
    let picks = greedy_multicover(&reduce(instance))?;
    Solution::new(picks, instance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ItemPair;

    fn idx(n: usize, a: usize, b: usize) -> usize {
        ItemPair::new(a, b).unwrap().index(n)
    }

    fn singletons(n: usize, r: u32) -> Instance {
        Instance::new(n, r, (0..n).map(|i| vec![i]).collect()).unwrap()
    }

    #[test]
    fn reduce_examples() {
        let i = Instance::new(3, 1, vec![vec![0], vec![]]).unwrap();
        let mc = reduce(&i);
        assert_eq!(mc.universe_size, 3);
        assert_eq!(mc.subsets[0], vec![idx(3, 0, 1), idx(3, 0, 2)]);
        assert!(mc.subsets[1].is_empty());

        let i = Instance::new(4, 1, vec![vec![0, 1]]).unwrap();
        let mut expect = vec![idx(4, 0, 2), idx(4, 0, 3), idx(4, 1, 2), idx(4, 1, 3)];
        expect.sort_unstable();
        assert_eq!(reduce(&i).subsets[0], expect);
    }

    #[test]
    fn greedy_examples() {
        let mc = MulticoverInstance {
            universe_size: 1,
            coverage: 1,
            subsets: vec![vec![0]],
        };
        assert_eq!(greedy_multicover(&mc).unwrap(), vec![0]);
        assert_eq!(
            greedy_multicover(&reduce(&singletons(4, 1))).unwrap(),
            vec![0, 1, 2]
        );
        assert_eq!(
            greedy_multicover(&reduce(&singletons(4, 2))).unwrap(),
            vec![0, 1, 2, 3]
        );
    }

    #[test]
    fn greedy_infeasible() {
        let mc = MulticoverInstance {
            universe_size: 2,
            coverage: 1,
            subsets: vec![vec![0]],
        };
        assert!(matches!(greedy_multicover(&mc), Err(Error::Infeasible(_))));
    }

    #[test]
    fn equivalence_examples() {
        assert!(verify_equivalence(&singletons(4, 1)));
        assert!(verify_equivalence(
            &Instance::new(2, 1, vec![vec![0]]).unwrap()
        ));
    }

    #[test]
    fn export_schema() {
        let mc = reduce(&Instance::new(2, 1, vec![vec![0]]).unwrap());
        assert_eq!(mc.to_json(), r#"{"N":1,"r":1,"subsets":[[0]]}"#);
        let back: MulticoverInstance = serde_json::from_str(&mc.to_json()).unwrap();
        assert_eq!(back, mc);
    }
}
