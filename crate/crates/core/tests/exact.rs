mod common;

use std::sync::Arc;

use afs_core::exact::{greedy_plan, optimistic_completion, singleton_gains, ExactError};
use afs_core::{brute_force, build_catalog, evaluate_plan, solve_exact, Instance, Network, StationPlan, VehicleSpec};
use common::{random_instance, sioux_falls};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Best objective over every extension of `chosen` by a subset of `rest`
/// that fits the budget.
fn subtree_optimum(inst: &Instance, chosen: &StationPlan, rest: &[usize]) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for mask in 0u32..1 << rest.len() {
        let mut plan = chosen.clone();
        for (i, &ix) in rest.iter().enumerate() {
            if mask >> i & 1 == 1 {
                plan.open(ix);
            }
        }
        if inst.within_budget(inst.plan_cost(&plan)) {
            best = best.max(inst.objective(&plan));
        }
    }
    best
}

#[test]
fn exact_matches_brute_force_on_200_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for case in 0..200 {
        let n = rng.gen_range(3..=8);
        let extra = rng.gen_range(0..=12 - (n - 1));
        let k = rng.gen_range(1..=2);
        let budget = rng.gen_range(0..=4) as f64;
        let inst = random_instance(&mut rng, n, extra, k, budget);
        assert!(inst.network().link_count() <= 12);
        let exact = solve_exact(&inst);
        let brute = brute_force(&inst).unwrap();
        assert!((exact.objective - brute.objective).abs() <= 1e-9, "case {case}");
        assert_eq!(exact.plan, brute.plan, "case {case}: lexicographic tie-break");
        assert!(exact.proven_optimal);
        assert!(inst.within_budget(inst.plan_cost(&exact.plan)));
        assert!((exact.objective - evaluate_plan(&inst, &exact.plan).unwrap().objective).abs() < 1e-12);
    }
}

#[test]
fn exact_matches_brute_force_with_costs_and_candidates() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for case in 0..100 {
        let inst = random_instance(&mut rng, 8, 4, 2, 0.0);
        let costs: Vec<f64> = (0..8).map(|_| rng.gen_range(1..=4) as f64).collect();
        let mut cand: Vec<bool> = (0..8).map(|_| rng.gen_bool(0.7)).collect();
        cand[0] = true;
        let inst = inst
            .with_costs(costs)
            .unwrap()
            .with_candidates(cand)
            .unwrap()
            .with_budget(rng.gen_range(0..=8) as f64)
            .unwrap();
        let exact = solve_exact(&inst);
        let brute = brute_force(&inst).unwrap();
        assert!((exact.objective - brute.objective).abs() <= 1e-9, "case {case}");
        assert_eq!(exact.plan, brute.plan, "case {case}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn bound_covers_every_subtree(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let budget = rng.gen_range(1..=4) as f64;
        let inst = random_instance(&mut rng, 8, 4, 2, budget);
        let inst = inst.with_costs((0..8).map(|_| rng.gen_range(1..=3) as f64).collect()).unwrap();
        let gains = singleton_gains(&inst);
        let mut order = inst.candidates();
        order.sort_by(|&a, &b| gains[b].total_cmp(&gains[a]).then(a.cmp(&b)));
        let depth = rng.gen_range(0..=order.len());
        let mut chosen = inst.empty_plan();
        for &ix in &order[..depth] {
            if rng.gen_bool(0.4) && inst.within_budget(inst.plan_cost(&chosen) + inst.costs()[ix]) {
                chosen.open(ix);
            }
        }
        let (upper, attained) = optimistic_completion(&inst, &chosen, &order[depth..]);
        let bound = inst.objective(&upper);
        let truth = subtree_optimum(&inst, &chosen, &order[depth..]);
        prop_assert!(bound >= truth - 1e-12);
        if attained {
            prop_assert!((bound - truth).abs() < 1e-12);
        }
    }
}

#[test]
fn zero_budget_gives_empty_plan() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let inst = random_instance(&mut rng, 8, 3, 2, 0.0);
    let res = solve_exact(&inst);
    assert!(res.plan.is_empty());
    assert_eq!(res.objective, inst.objective(&inst.empty_plan()));
}

#[test]
fn budget_for_everything_opens_everything_useful() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let inst = random_instance(&mut rng, 8, 3, 2, 8.0);
    let res = solve_exact(&inst);
    assert!((res.objective - inst.objective(&inst.full_plan())).abs() < 1e-12);
}

#[test]
fn single_candidate_taken_iff_it_helps() {
    // 1 -60- 2 -60- 3, only node 2 may host a station
    let net = Arc::new(Network::parse("nodes=3 links=2 symmetric=1\n1 2 60\n2 3 60\n").unwrap());
    let cat = Arc::new(build_catalog(&net, 1, None).unwrap());
    let base = Instance::new(net, cat, VehicleSpec::full(100.0).unwrap())
        .unwrap()
        .with_candidates(vec![false, true, false])
        .unwrap();
    let helps = base.clone().with_budget(1.0).unwrap();
    assert_eq!(solve_exact(&helps).plan.indices().collect::<Vec<_>>(), vec![1]);
    assert_eq!(brute_force(&helps).unwrap().plan, solve_exact(&helps).plan);

    let too_poor = base.clone().with_budget(0.5).unwrap();
    assert!(solve_exact(&too_poor).plan.is_empty());

    let useless = base.with_vehicle(VehicleSpec::full(500.0).unwrap()).with_budget(1.0).unwrap();
    assert!(solve_exact(&useless).plan.is_empty());
    assert!(brute_force(&useless).unwrap().plan.is_empty());
}

#[test]
fn brute_force_refuses_large_candidate_sets() {
    let inst = sioux_falls(1, 100.0, 2.0);
    assert_eq!(
        brute_force(&inst).unwrap_err(),
        ExactError::TooManyCandidates { limit: 16, got: 24 }
    );
}

#[test]
fn sioux_falls_small_budgets() {
    let expected = [(1.0, 2.4522), (2.0, 3.7967), (3.0, 5.1204)];
    let mut last = 0.0;
    for (budget, value) in expected {
        let inst = sioux_falls(3, 100.0, budget);
        let res = solve_exact(&inst);
        assert!((res.objective - value).abs() < 5e-5, "budget {budget}: {}", res.objective);
        assert!(res.objective >= last);
        assert!(res.objective >= inst.objective(&greedy_plan(&inst)) - 1e-12);
        last = res.objective;
    }
    let res = solve_exact(&sioux_falls(3, 100.0, 3.0));
    assert_eq!(res.plan.ids(&afs_core::dataset::sioux_falls_network()), vec![3, 6, 16]);
}
