mod common;

use std::sync::Arc;

use afs_core::refuel::simulate_path;
use afs_core::{
    build_catalog, evaluate_plan, objective_ceiling, solve_exact, Denominator, Instance, Network, StationPlan,
    VehicleSpec,
};
use common::{random_instance, random_plan, sioux_falls};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn instance(text: &str, k: usize, range: f64) -> Instance {
    let net = Arc::new(Network::parse(text).unwrap());
    let cat = Arc::new(build_catalog(&net, k, None).unwrap());
    Instance::new(net, cat, VehicleSpec::full(range).unwrap()).unwrap()
}

fn assert_report_consistent(inst: &Instance, plan: &StationPlan) {
    let rep = evaluate_plan(inst, plan).unwrap();
    let n = inst.node_count();
    assert_eq!(rep.pairs.len(), n * (n - 1));
    for pair in &rep.pairs {
        let paths = inst.catalog().paths(pair.origin, pair.destination);
        let first = paths.iter().position(|p| simulate_path(p, plan, inst.vehicle()).feasible);
        assert_eq!(pair.covered, first.is_some());
        assert_eq!(pair.path_index, first);
    }
    let mut total = 0.0;
    for r in 0..n {
        let covered = rep.pairs.iter().filter(|p| p.origin == r && p.covered).count();
        let z = covered as f64 / inst.denominators()[r];
        assert!((rep.node_coverage[r] - z).abs() < 1e-12);
        assert!((0.0..=1.0).contains(&rep.node_coverage[r]));
        total += inst.probabilities()[r] * z;
    }
    assert!((rep.objective - total).abs() < 1e-9);
    assert!((inst.objective(plan) - rep.objective).abs() < 1e-9);
}

#[test]
fn ample_range_covers_everything_without_stations() {
    let inst = instance("nodes=4 links=4 symmetric=1\n1 2 10\n2 3 20\n3 4 15\n1 4 40\n", 2, 200.0);
    let rep = evaluate_plan(&inst, &inst.empty_plan()).unwrap();
    assert!(rep.pairs.iter().all(|p| p.covered));
    assert!(rep.node_coverage.iter().all(|&z| (z - 0.75).abs() < 1e-12));
    assert_eq!(rep.objective, objective_ceiling(&inst));
}

#[test]
fn three_of_four_destinations() {
    // r = 1 with spokes to a, b, d at 40 and c at 70
    let inst = instance(
        "nodes=5 links=4 symmetric=1\n1 2 40\n1 3 40\n1 4 70\n1 5 40\n",
        1,
        100.0,
    )
    .with_denominator(Denominator::DestinationCount);
    let rep = evaluate_plan(&inst, &inst.empty_plan()).unwrap();
    assert_eq!(rep.node_coverage[0], 0.75);
}

#[test]
fn ceiling_values() {
    let inst = sioux_falls(3, 100.0, 24.0);
    assert!((objective_ceiling(&inst) - 10.6965).abs() < 5e-5);
    assert!((objective_ceiling(&inst.clone().with_unit_probabilities()) - 23.0).abs() < 1e-9);
    let single = instance("nodes=1 links=0 symmetric=1\n", 1, 10.0);
    assert_eq!(objective_ceiling(&single), 0.0);
}

#[test]
fn full_plan_reaches_ceiling_on_sioux_falls() {
    let inst = sioux_falls(3, 100.0, 24.0);
    assert!(inst.vehicle().range() >= inst.network().max_link_distance());
    let rep = evaluate_plan(&inst, &inst.full_plan()).unwrap();
    assert!(rep.pairs.iter().all(|p| p.covered));
    assert!((rep.objective - objective_ceiling(&inst)).abs() < 1e-12);
}

#[test]
fn sioux_falls_three_station_plan() {
    let inst = sioux_falls(3, 100.0, 3.0);
    let plan = StationPlan::from_ids(inst.network(), [3, 6, 16]).unwrap();
    let rep = evaluate_plan(&inst, &plan).unwrap();
    assert!((rep.objective - 5.1204).abs() < 5e-5, "{}", rep.objective);
    assert_report_consistent(&inst, &plan);
    // the per-node breakdown sums to the objective
    let csv = rep.to_csv(&inst);
    let sum: f64 = csv
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with("total"))
        .map(|l| l.rsplit(',').next().unwrap().parse::<f64>().unwrap())
        .sum();
    assert!((sum - rep.objective).abs() < 1e-5);
}

#[test]
fn rejects_non_candidate_plan() {
    let inst = instance("nodes=3 links=2 symmetric=1\n1 2 10\n2 3 10\n", 1, 50.0)
        .with_candidates(vec![true, false, true])
        .unwrap();
    assert!(evaluate_plan(&inst, &StationPlan::from_indices(3, [1])).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reports_are_consistent(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&mut rng, 7, 4, 2, 7.0);
        let plan = random_plan(&mut rng, 7, 0.4);
        assert_report_consistent(&inst, &plan);
    }

    #[test]
    fn objective_is_monotone_in_plan(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&mut rng, 8, 4, 2, 8.0);
        let small = random_plan(&mut rng, 8, 0.3);
        let mut big = small.clone();
        for ix in random_plan(&mut rng, 8, 0.3).indices() {
            big.open(ix);
        }
        prop_assert!(inst.objective(&small) <= inst.objective(&big) + 1e-12);
    }

    #[test]
    fn more_paths_never_lose_coverage(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&mut rng, 8, 5, 3, 8.0);
        let plan = random_plan(&mut rng, 8, 0.3);
        let narrow = inst.clone().with_catalog(Arc::new(inst.catalog().truncated(1))).unwrap();
        let wide = evaluate_plan(&inst, &plan).unwrap();
        let base = evaluate_plan(&narrow, &plan).unwrap();
        for (a, b) in base.pairs.iter().zip(&wide.pairs) {
            prop_assert!(!a.covered || b.covered);
        }
        prop_assert!(base.objective <= wide.objective + 1e-12);
    }

    #[test]
    fn scaling_probabilities_scales_objective_and_keeps_argmax(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_instance(&mut rng, 7, 3, 2, 2.0);
        let half: Vec<f64> = inst.probabilities().iter().map(|p| p * 0.5).collect();
        let scaled = inst.clone().with_probabilities(half).unwrap();
        let a = solve_exact(&inst);
        let b = solve_exact(&scaled);
        prop_assert_eq!(&a.plan, &b.plan);
        prop_assert!((b.objective - 0.5 * a.objective).abs() < 1e-12);

        let third: Vec<f64> = inst.probabilities().iter().map(|p| p * 0.3).collect();
        let c = solve_exact(&inst.clone().with_probabilities(third).unwrap());
        prop_assert!((c.objective - 0.3 * a.objective).abs() < 1e-9);
        prop_assert!((inst.objective(&c.plan) - a.objective).abs() < 1e-9);
    }
}

#[test]
fn sioux_falls_monotone_in_k() {
    let inst = sioux_falls(3, 100.0, 5.0);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let plan = random_plan(&mut rng, 24, 0.25);
        let mut last = f64::NEG_INFINITY;
        for k in 1..=3 {
            let v = inst
                .clone()
                .with_catalog(Arc::new(inst.catalog().truncated(k)))
                .unwrap()
                .objective(&plan);
            assert!(v >= last - 1e-12);
            last = v;
        }
    }
}
