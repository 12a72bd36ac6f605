//! Origin-destination coverage, node coverage and the expected-coverage
//! objective for a fixed station plan.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::netgraph::{Network, NodeId, PathCatalog};
use crate::refuel::{gap_profile, simulate_path, RefuelSchedule, StationPlan, VehicleSpec};

#[derive(Debug, Error, PartialEq)]
pub enum CoverageError {
    #[error("catalog was built for a different node set")]
    CatalogMismatch,
    #[error("expected {expected} values, got {got}")]
    Length { expected: usize, got: usize },
    #[error("probability {value} of node {node} is outside [0, 1]")]
    Probability { node: NodeId, value: f64 },
    #[error("station cost {value} of node {node} must be positive and finite")]
    Cost { node: NodeId, value: f64 },
    #[error("budget must be nonnegative and finite, got {0}")]
    Budget(f64),
    #[error("coverage denominator {value} of node {node} must be at least 1")]
    Denominator { node: NodeId, value: f64 },
    #[error("candidate set is empty")]
    NoCandidates,
    #[error("node {0} is not a candidate station site")]
    NotCandidate(NodeId),
    #[error("plan covers {got} nodes, network has {expected}")]
    PlanSize { expected: usize, got: usize },
}

/// How a node's covered-destination count is normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Denominator {
    /// Divide by the total node count, self pair included.
    NodeCount,
    /// Divide by the number of other nodes.
    DestinationCount,
}

/// A complete problem: network, path catalog, demand probabilities, costs,
/// budget, vehicle and candidate sites.
#[derive(Debug, Clone)]
pub struct Instance {
    network: Arc<Network>,
    catalog: Arc<PathCatalog>,
    probabilities: Vec<f64>,
    costs: Vec<f64>,
    budget: f64,
    vehicle: VehicleSpec,
    candidates: Vec<bool>,
    denominators: Vec<f64>,
}

impl Instance {
    /// Every node is a candidate with unit cost and probability one; the
    /// budget allows opening every candidate; coverage is normalized by the
    /// node count.
    pub fn new(
        network: Arc<Network>,
        catalog: Arc<PathCatalog>,
        vehicle: VehicleSpec,
    ) -> Result<Self, CoverageError> {
        if !catalog.is_compatible_with(&network) {
            return Err(CoverageError::CatalogMismatch);
        }
        let n = network.node_count();
        Ok(Instance {
            network,
            catalog,
            probabilities: vec![1.0; n],
            costs: vec![1.0; n],
            budget: n as f64,
            vehicle,
            candidates: vec![true; n],
            denominators: vec![n as f64; n],
        })
    }

    fn check_len(&self, len: usize) -> Result<(), CoverageError> {
        let expected = self.network.node_count();
        if len != expected {
            return Err(CoverageError::Length { expected, got: len });
        }
        Ok(())
    }

    pub fn with_probabilities(mut self, probabilities: Vec<f64>) -> Result<Self, CoverageError> {
        self.check_len(probabilities.len())?;
        for (ix, &p) in probabilities.iter().enumerate() {
            if !(0.0..=1.0).contains(&p) {
                return Err(CoverageError::Probability {
                    node: self.network.id(ix),
                    value: p,
                });
            }
        }
        self.probabilities = probabilities;
        Ok(self)
    }

    /// Replaces every probability with one, i.e. unweighted coverage.
    pub fn with_unit_probabilities(mut self) -> Self {
        self.probabilities.iter_mut().for_each(|p| *p = 1.0);
        self
    }

    /// Costs per node; entries for non-candidates are ignored but must
    /// still be valid.
    pub fn with_costs(mut self, costs: Vec<f64>) -> Result<Self, CoverageError> {
        self.check_len(costs.len())?;
        for (ix, &c) in costs.iter().enumerate() {
            if !(c > 0.0) || !c.is_finite() {
                return Err(CoverageError::Cost {
                    node: self.network.id(ix),
                    value: c,
                });
            }
        }
        self.costs = costs;
        Ok(self)
    }

    pub fn with_budget(mut self, budget: f64) -> Result<Self, CoverageError> {
        if !(budget >= 0.0) || !budget.is_finite() {
            return Err(CoverageError::Budget(budget));
        }
        self.budget = budget;
        Ok(self)
    }

    pub fn with_vehicle(mut self, vehicle: VehicleSpec) -> Self {
        self.vehicle = vehicle;
        self
    }

    pub fn with_catalog(mut self, catalog: Arc<PathCatalog>) -> Result<Self, CoverageError> {
        if !catalog.is_compatible_with(&self.network) {
            return Err(CoverageError::CatalogMismatch);
        }
        self.catalog = catalog;
        Ok(self)
    }

    pub fn with_candidates(mut self, candidates: Vec<bool>) -> Result<Self, CoverageError> {
        self.check_len(candidates.len())?;
        if !candidates.iter().any(|&c| c) {
            return Err(CoverageError::NoCandidates);
        }
        self.candidates = candidates;
        Ok(self)
    }

    pub fn with_denominator(mut self, rule: Denominator) -> Self {
        let n = self.network.node_count() as f64;
        let value = match rule {
            Denominator::NodeCount => n,
            Denominator::DestinationCount => (n - 1.0).max(1.0),
        };
        self.denominators = vec![value; self.network.node_count()];
        self
    }

    pub fn with_denominators(mut self, denominators: Vec<f64>) -> Result<Self, CoverageError> {
        self.check_len(denominators.len())?;
        for (ix, &d) in denominators.iter().enumerate() {
            if !(d >= 1.0) || !d.is_finite() {
                return Err(CoverageError::Denominator {
                    node: self.network.id(ix),
                    value: d,
                });
            }
        }
        self.denominators = denominators;
        Ok(self)
    }

    pub fn network(&self) -> &Network {
        &self.network
    }

    pub fn network_arc(&self) -> Arc<Network> {
        Arc::clone(&self.network)
    }

    pub fn catalog(&self) -> &PathCatalog {
        &self.catalog
    }

    pub fn catalog_arc(&self) -> Arc<PathCatalog> {
        Arc::clone(&self.catalog)
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn costs(&self) -> &[f64] {
        &self.costs
    }

    pub fn budget(&self) -> f64 {
        self.budget
    }

    pub fn vehicle(&self) -> &VehicleSpec {
        &self.vehicle
    }

    pub fn denominators(&self) -> &[f64] {
        &self.denominators
    }

    pub fn node_count(&self) -> usize {
        self.network.node_count()
    }

    pub fn is_candidate(&self, ix: usize) -> bool {
        self.candidates[ix]
    }

    /// Candidate sites as ascending dense indices.
    pub fn candidates(&self) -> Vec<usize> {
        (0..self.node_count()).filter(|&ix| self.candidates[ix]).collect()
    }

    pub fn plan_cost(&self, plan: &StationPlan) -> f64 {
        plan.cost(&self.costs)
    }

    /// Budget check with a small tolerance for fractional costs.
    pub fn within_budget(&self, cost: f64) -> bool {
        cost <= self.budget + 1e-9
    }

    pub fn empty_plan(&self) -> StationPlan {
        StationPlan::empty(self.node_count())
    }

    /// Every candidate open.
    pub fn full_plan(&self) -> StationPlan {
        StationPlan::from_mask(self.candidates.clone())
    }

    pub fn validate_plan(&self, plan: &StationPlan) -> Result<(), CoverageError> {
        if plan.node_count() != self.node_count() {
            return Err(CoverageError::PlanSize {
                expected: self.node_count(),
                got: plan.node_count(),
            });
        }
        match plan.indices().find(|&ix| !self.candidates[ix]) {
            Some(ix) => Err(CoverageError::NotCandidate(self.network.id(ix))),
            None => Ok(()),
        }
    }

    /// Objective value of a plan without building a report.
    ///
    /// Assumes the plan is well formed; solvers call this in their inner
    /// loops.
    pub fn objective(&self, plan: &StationPlan) -> f64 {
        (0..self.node_count())
            .filter(|&r| self.probabilities[r] != 0.0)
            .map(|r| self.probabilities[r] * self.origin_coverage(plan, r))
            .sum()
    }

    /// Coverage `z_r` of a single origin.
    pub fn origin_coverage(&self, plan: &StationPlan, r: usize) -> f64 {
        let covered = (0..self.node_count())
            .filter(|&s| s != r)
            .filter(|&s| {
                self.catalog
                    .paths(r, s)
                    .iter()
                    .any(|path| gap_profile(path, plan, &self.vehicle))
            })
            .count();
        covered as f64 / self.denominators[r]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairCoverage {
    pub origin: usize,
    pub destination: usize,
    pub covered: bool,
    /// Catalog index of the first feasible path, when covered.
    pub path_index: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageReport {
    pub pairs: Vec<PairCoverage>,
    /// Coverage `z_r` per node, dense order.
    pub node_coverage: Vec<f64>,
    pub objective: f64,
    pub plan: StationPlan,
}

/// Evaluates a plan: tests every pair's paths in catalog order and stops at
/// the first feasible one.
///
/// With the plan fixed this is the exact completion of the routing and
/// refueling decisions. The budget is not checked here.
pub fn evaluate_plan(inst: &Instance, plan: &StationPlan) -> Result<CoverageReport, CoverageError> {
    inst.validate_plan(plan)?;
    let n = inst.node_count();
    let vehicle = inst.vehicle();
    let mut pairs = Vec::with_capacity(n * n.saturating_sub(1));
    let mut node_coverage = vec![0.0; n];
    let mut objective = 0.0;
    for r in 0..n {
        let mut covered = 0usize;
        for s in (0..n).filter(|&s| s != r) {
            let path_index = inst
                .catalog()
                .paths(r, s)
                .iter()
                .position(|path| simulate_path(path, plan, vehicle).feasible);
            covered += usize::from(path_index.is_some());
            pairs.push(PairCoverage {
                origin: r,
                destination: s,
                covered: path_index.is_some(),
                path_index,
            });
        }
        node_coverage[r] = covered as f64 / inst.denominators()[r];
        objective += inst.probabilities()[r] * node_coverage[r];
    }
    Ok(CoverageReport {
        pairs,
        node_coverage,
        objective,
        plan: plan.clone(),
    })
}

/// Largest attainable objective: every pair with distinct endpoints covered.
pub fn objective_ceiling(inst: &Instance) -> f64 {
    let others = inst.node_count().saturating_sub(1) as f64;
    inst.probabilities()
        .iter()
        .zip(inst.denominators())
        .map(|(p, d)| p * others / d)
        .sum()
}

impl CoverageReport {
    pub fn pair(&self, r: usize, s: usize) -> &PairCoverage {
        let n = self.node_coverage.len();
        &self.pairs[r * (n - 1) + if s < r { s } else { s - 1 }]
    }

    pub fn covered_pairs(&self) -> usize {
        self.pairs.iter().filter(|p| p.covered).count()
    }

    /// Refueling schedule along the realized path of a covered pair.
    pub fn schedule(&self, inst: &Instance, r: usize, s: usize) -> Option<RefuelSchedule> {
        let k = self.pair(r, s).path_index?;
        simulate_path(&inst.catalog().paths(r, s)[k], &self.plan, inst.vehicle()).schedule
    }

    /// Per-node table: `node,probability,coverage,expected_coverage` with a
    /// closing total row.
    pub fn to_csv(&self, inst: &Instance) -> String {
        let mut out = String::from("node,probability,coverage,expected_coverage\n");
        for (ix, &z) in self.node_coverage.iter().enumerate() {
            let p = inst.probabilities()[ix];
            let _ = writeln!(out, "{},{:.4},{:.6},{:.6}", inst.network().id(ix), p, z, p * z);
        }
        let _ = writeln!(out, "total,,,{:.6}", self.objective);
        out
    }

    pub fn to_json(&self, inst: &Instance) -> serde_json::Value {
        let net = inst.network();
        let nodes: Vec<_> = self
            .node_coverage
            .iter()
            .enumerate()
            .map(|(ix, &z)| {
                serde_json::json!({
                    "node": net.id(ix),
                    "probability": inst.probabilities()[ix],
                    "coverage": z,
                    "expected_coverage": inst.probabilities()[ix] * z,
                })
            })
            .collect();
        let pairs: Vec<_> = self
            .pairs
            .iter()
            .map(|p| {
                serde_json::json!({
                    "origin": net.id(p.origin),
                    "destination": net.id(p.destination),
                    "covered": p.covered,
                    "path_index": p.path_index,
                })
            })
            .collect();
        serde_json::json!({
            "plan": self.plan.ids(net),
            "objective": self.objective,
            "nodes": nodes,
            "pairs": pairs,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netgraph::build_catalog;

    fn instance(src: &str, k: usize, vehicle: VehicleSpec) -> Instance {
        let net = Arc::new(Network::parse(src).unwrap());
        let cat = Arc::new(build_catalog(&net, k, None).unwrap());
        Instance::new(net, cat, vehicle).unwrap()
    }

    /// Star with origin r = 1 and destinations a..d = 2..5; r-c is too long.
    fn star() -> Instance {
        let src = "nodes=5 links=4 symmetric=1\n1 2 10\n1 3 10\n1 4 80\n1 5 10\n";
        instance(src, 1, VehicleSpec::full(100.0).unwrap()).with_denominator(Denominator::DestinationCount)
    }

    #[test]
    fn three_of_four_destinations() {
        let inst = star();
        let rep = evaluate_plan(&inst, &inst.empty_plan()).unwrap();
        assert_eq!(rep.node_coverage[0], 0.75);
        assert!(!rep.pair(0, 3).covered);
        assert!(rep.pair(0, 1).covered);
    }

    #[test]
    fn generous_range_covers_everything() {
        let src = "nodes=4 links=3 symmetric=1\n1 2 10\n2 3 10\n3 4 10\n";
        // diameter 30
        let inst = instance(src, 2, VehicleSpec::full(60.0).unwrap());
        let rep = evaluate_plan(&inst, &inst.empty_plan()).unwrap();
        for &z in &rep.node_coverage {
            assert_eq!(z, 3.0 / 4.0);
        }
        assert_eq!(rep.objective, objective_ceiling(&inst));
        assert_eq!(inst.objective(&inst.empty_plan()), rep.objective);
    }

    #[test]
    fn ceiling_arithmetic() {
        let edges: String = (1..24).map(|i| format!("{} {} 1\n", i, i + 1)).collect();
        let src = format!("nodes=24 links=23 symmetric=1\n{edges}");
        let inst = instance(&src, 1, VehicleSpec::full(10.0).unwrap());
        assert!((objective_ceiling(&inst) - 23.0).abs() < 1e-12);

        let single = instance("nodes=1 links=0 symmetric=1\n", 1, VehicleSpec::full(10.0).unwrap());
        assert_eq!(objective_ceiling(&single), 0.0);
        let rep = evaluate_plan(&single, &single.empty_plan()).unwrap();
        assert_eq!(rep.objective, 0.0);
        assert!(rep.pairs.is_empty());
    }

    #[test]
    fn rejects_non_candidate_station() {
        let inst = star().with_candidates(vec![true, true, false, true, true]).unwrap();
        let plan = StationPlan::from_indices(5, [2]);
        assert_eq!(evaluate_plan(&inst, &plan).unwrap_err(), CoverageError::NotCandidate(3));
    }

    #[test]
    fn builder_validation() {
        let inst = star();
        assert!(matches!(
            inst.clone().with_probabilities(vec![0.5; 4]),
            Err(CoverageError::Length { expected: 5, got: 4 })
        ));
        assert!(matches!(
            inst.clone().with_probabilities(vec![0.5, 0.5, 1.5, 0.0, 0.1]),
            Err(CoverageError::Probability { node: 3, .. })
        ));
        assert!(matches!(inst.clone().with_costs(vec![1.0, 0.0, 1.0, 1.0, 1.0]), Err(CoverageError::Cost { .. })));
        assert!(matches!(inst.clone().with_budget(-1.0), Err(CoverageError::Budget(_))));
        assert!(matches!(inst.clone().with_candidates(vec![false; 5]), Err(CoverageError::NoCandidates)));
        assert!(matches!(
            inst.clone().with_denominators(vec![0.5; 5]),
            Err(CoverageError::Denominator { .. })
        ));
        let other = Network::parse("nodes=2 links=1 symmetric=1\n1 2 1\n").unwrap();
        let cat = Arc::new(build_catalog(&other, 1, None).unwrap());
        assert!(matches!(inst.with_catalog(cat), Err(CoverageError::CatalogMismatch)));
    }

    #[test]
    fn station_extends_coverage_and_schedule_is_reported() {
        let inst = star();
        let plan = StationPlan::from_indices(5, [3]);
        let rep = evaluate_plan(&inst, &plan).unwrap();
        assert_eq!(rep.node_coverage[0], 1.0);
        let sched = rep.schedule(&inst, 0, 3).unwrap();
        assert_eq!(sched.refuel_count(), 1);
        assert!(rep.schedule(&inst, 0, 1).unwrap().refuel_count() == 0);
        let csv = rep.to_csv(&inst);
        assert!(csv.starts_with("node,probability,coverage,expected_coverage\n1,1.0000,"));
        assert!(csv.trim_end().ends_with(&format!("total,,,{:.6}", rep.objective)));
    }
}
