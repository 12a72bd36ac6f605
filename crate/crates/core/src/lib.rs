//! Refueling station siting on road networks under uncertain demand.
//!
//! Stations are placed to maximize expected node coverage: a node's
//! coverage is the share of its round trips that a range-limited vehicle can
//! complete on one of a few precomputed deviation paths, and the objective
//! weighs each node by the probability that it becomes a demand node.

pub mod coverage;
pub mod dataset;
pub mod exact;
pub mod ga;
pub mod lp;
pub mod milp;
pub mod netgraph;
pub mod refuel;

pub use coverage::{evaluate_plan, objective_ceiling, CoverageReport, Denominator, Instance};

pub use exact::{brute_force, solve_exact, SolveResult};
pub use ga::{run_ga, GaConfig};
pub use netgraph::{build_catalog, Network, NodeId, PathCatalog};
pub use refuel::{StationPlan, VehicleSpec};
