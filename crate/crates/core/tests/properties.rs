use proptest::prelude::*;

use testset::exact::{all_optima, count_exactly_r, solve_exact, OptimalCertificate};
use testset::generators::gen_random;
use testset::model::{
    is_r_test_set, perp_count, DifferentiationState, Instance, ItemPair, Solution,
};
use testset::multicover::{reduce, verify_equivalence};
use testset::sga::{run_sga, SgaTrace};

fn instance_strategy(max_n: usize, max_t: usize, max_r: u32) -> impl Strategy<Value = Instance> {
    (2..=max_n, 0..=max_t, 1..=max_r).prop_flat_map(|(n, t, r)| {
        prop::collection::vec(prop::collection::vec(any::<bool>(), n), t).prop_map(move |masks| {
            let tests = masks
                .iter()
                .map(|m| (0..n).filter(|&i| m[i]).collect())
                .collect();
            Instance::new(n, r, tests).unwrap()
        })
    })
}

/// Measure straight from the definition: Σ_a max(r − ⊥(a, picks), 0).
fn measure_from_scratch(picks: &[usize], instance: &Instance) -> u64 {
    let sol = Solution::new(picks.to_vec(), instance).unwrap();
    ItemPair::all(instance.n())
        .map(|a| (instance.r() as i64 - perp_count(a, &sol, instance) as i64).max(0) as u64)
        .sum()
}

/// Greedy by brute force: recompute the measure of 𝒯̄ ∪ {T} for every
/// candidate from scratch, keep the first minimizer.
fn naive_greedy(instance: &Instance) -> Option<Vec<usize>> {
    let mut picks: Vec<usize> = Vec::new();
    let mut current = measure_from_scratch(&picks, instance);
    while current > 0 {
        let mut best: Option<(usize, u64)> = None;
        for j in 0..instance.num_tests() {
            if picks.contains(&j) {
                continue;
            }
            let mut trial = picks.clone();
            trial.push(j);
            let m = measure_from_scratch(&trial, instance);
            if best.is_none_or(|(_, b)| m < b) {
                best = Some((j, m));
            }
        }
        let (j, m) = best?;
        if m == current {
            return None;
        }
        picks.push(j);
        current = m;
    }
    Some(picks)
}

/// Smallest r-test set by plain enumeration of all subsets in increasing size.
fn brute_force_optimum(instance: &Instance) -> Option<usize> {
    let t = instance.num_tests();
    (0..=t).find(|&k| {
        (0u32..1 << t)
            .filter(|m| m.count_ones() as usize == k)
            .any(|mask| {
                let picks = (0..t).filter(|&j| mask >> j & 1 == 1).collect();
                is_r_test_set(&Solution::new(picks, instance).unwrap(), instance)
            })
    })
}

fn certificate(instance: &Instance) -> OptimalCertificate {
    solve_exact(instance, None)
        .unwrap()
        .certificate()
        .cloned()
        .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn incremental_state_matches_batch(inst in instance_strategy(7, 8, 3), order in any::<u64>()) {
        let mut picks: Vec<usize> = (0..inst.num_tests()).collect();
        // deterministic shuffle from the drawn value
        let len = picks.len();
        for i in (1..len).rev() {
            picks.swap(i, (order.wrapping_mul(i as u64 + 7) % (i as u64 + 1)) as usize);
        }
        let mut state = DifferentiationState::new(&inst);
        let mut last = state.measure();
        for (k, &j) in picks.iter().enumerate() {
            state.apply_test(j).unwrap();
            prop_assert!(state.measure() <= last);
            last = state.measure();
            prop_assert_eq!(state.measure(), state.recompute_measure());
            prop_assert_eq!(state.measure(), measure_from_scratch(&picks[..=k], &inst));
            let sol = Solution::new(picks[..=k].to_vec(), &inst).unwrap();
            for a in ItemPair::all(inst.n()) {
                prop_assert_eq!(state.count(a) as usize, perp_count(a, &sol, &inst));
            }
            prop_assert_eq!(state.measure() == 0, is_r_test_set(&sol, &inst));
        }
        let all = Solution::new((0..inst.num_tests()).collect(), &inst).unwrap();
        prop_assert_eq!(inst.is_feasible(), is_r_test_set(&all, &inst));
    }

    #[test]
    fn sga_matches_brute_force_greedy(inst in instance_strategy(7, 9, 3)) {
        let naive = naive_greedy(&inst);
        match run_sga(&inst) {
            Ok(trace) => {
                prop_assert!(inst.is_feasible());
                prop_assert_eq!(Some(trace.solution.picks().to_vec()), naive);
                prop_assert!(is_r_test_set(&trace.solution, &inst));
                for w in trace.steps.windows(2) {
                    prop_assert_eq!(w[0].measure_after, w[1].measure_before);
                }
                prop_assert!(trace.steps.iter().all(|s| s.delta() > 0));
                prop_assert_eq!(trace.steps.last().map_or(0, |s| s.measure_after), 0);
                prop_assert_eq!(run_sga(&inst).unwrap(), trace);
            }
            Err(_) => {
                prop_assert!(!inst.is_feasible());
                prop_assert_eq!(naive, None);
            }
        }
    }

    #[test]
    fn sga_equals_greedy_multicover(inst in instance_strategy(8, 10, 3)) {
        prop_assert!(verify_equivalence(&inst));
    }

    #[test]
    fn reduction_preserves_r_test_sets(inst in instance_strategy(8, 10, 3), mask in any::<u32>()) {
        let mc = reduce(&inst);
        for (j, subset) in mc.subsets.iter().enumerate() {
            let size = inst.test(j).len();
            prop_assert_eq!(subset.len(), size * (inst.n() - size));
        }
        let picks: Vec<usize> = (0..inst.num_tests()).filter(|&j| mask >> j & 1 == 1).collect();
        let sol = Solution::new(picks.clone(), &inst).unwrap();
        prop_assert_eq!(is_r_test_set(&sol, &inst), mc.is_r_cover(&picks));
    }

    #[test]
    fn exact_matches_enumeration(inst in instance_strategy(5, 9, 2)) {
        match solve_exact(&inst, None) {
            Ok(outcome) => {
                let c = outcome.certificate().cloned().unwrap();
                prop_assert_eq!(Some(c.m_star), brute_force_optimum(&inst));
                prop_assert!(is_r_test_set(&c.witness, &inst));
                prop_assert_eq!(c.hash_b, count_exactly_r(&c.witness, &inst).unwrap());
                prop_assert!(c.hash_b >= 1);
                let optima = all_optima(&inst, c.m_star, None).unwrap().unwrap();
                prop_assert_eq!(optima.first(), Some(&c.witness));
                prop_assert!(run_sga(&inst).unwrap().len() >= c.m_star);
            }
            Err(_) => prop_assert!(!inst.is_feasible()),
        }
    }

    #[test]
    fn optimum_is_monotone(inst in instance_strategy(6, 8, 2), extra in prop::collection::vec(any::<bool>(), 6)) {
        prop_assume!(inst.is_feasible());
        let m = certificate(&inst).m_star;
        let test = (0..inst.n()).filter(|&i| extra[i]).collect();
        let more = inst.with_extra_test(test).unwrap();
        prop_assert!(certificate(&more).m_star <= m);
        let harder = inst.with_r(inst.r() + 1).unwrap();
        if harder.is_feasible() {
            prop_assert!(certificate(&harder).m_star >= m);
        }
    }

    #[test]
    fn random_generation_round_trips(n in 2usize..10, t in 0usize..12, r in 1u32..4, seed in any::<u64>()) {
        let inst = gen_random(n, t, 0.5, r, seed).unwrap();
        let json = inst.to_json();
        let back = Instance::from_json(&json).unwrap();
        prop_assert_eq!(back.to_json(), json);
        prop_assert_eq!(gen_random(n, t, 0.5, r, seed).unwrap(), inst);
    }

    #[test]
    fn trace_export_round_trips(inst in instance_strategy(6, 8, 2)) {
        if let Ok(trace) = run_sga(&inst) {
            let back = SgaTrace::from_steps_json(&trace.steps_json(), &inst).unwrap();
            prop_assert_eq!(back, trace);
        }
    }
}

#[test]
fn singleton_examples_end_to_end() {
    let singletons =
        |n: usize, r: u32| Instance::new(n, r, (0..n).map(|i| vec![i]).collect()).unwrap();
    assert_eq!(
        run_sga(&singletons(4, 1)).unwrap().solution.picks(),
        &[0, 1, 2]
    );
    assert_eq!(certificate(&singletons(4, 1)).m_star, 3);
    let c = certificate(&singletons(4, 2));
    assert_eq!((c.m_star, c.hash_b), (4, 6));
    assert!(verify_equivalence(&singletons(4, 2)));
}
