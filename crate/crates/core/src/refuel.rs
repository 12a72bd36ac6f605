//! Round-trip feasibility for a fixed set of open stations.
//!
//! Stations are uncapacitated and refueling is free, so filling up to the
//! full range at every open station visited is an optimal policy. The
//! greedy simulation, the gap check and the interval dynamic program below
//! are three independent ways of answering the same question and must agree
//! on every input.

use std::cmp::Ordering;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::netgraph::{Network, NodeId, RoundTripPath};

/// Fuel may dip this far below zero before a trip counts as infeasible.
pub const FEASIBILITY_SLACK: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum RefuelError {
    #[error("vehicle range must be positive and finite, got {0}")]
    InvalidRange(f64),
    #[error("initial fuel {initial} must lie in [0, {range}]")]
    InvalidInitialFuel { initial: f64, range: f64 },
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
}

/// Range and initial fuel, both in distance units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VehicleSpec {
    range: f64,
    initial_fuel: f64,
}

impl VehicleSpec {
    pub fn new(range: f64, initial_fuel: f64) -> Result<Self, RefuelError> {
        if !(range > 0.0) || !range.is_finite() {
            return Err(RefuelError::InvalidRange(range));
        }
        if !(0.0..=range).contains(&initial_fuel) {
            return Err(RefuelError::InvalidInitialFuel {
                initial: initial_fuel,
                range,
            });
        }
        Ok(VehicleSpec { range, initial_fuel })
    }

    /// Starts every trip with a full tank.
    pub fn full(range: f64) -> Result<Self, RefuelError> {
        Self::new(range, range)
    }

    /// Starts every trip with `fraction` of the range.
    pub fn with_initial_fraction(range: f64, fraction: f64) -> Result<Self, RefuelError> {
        Self::new(range, range * fraction)
    }

    pub fn range(&self) -> f64 {
        self.range
    }

    pub fn initial_fuel(&self) -> f64 {
        self.initial_fuel
    }
}

/// The set of nodes hosting a station, as a mask over dense node indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StationPlan {
    open: Vec<bool>,
}

impl StationPlan {
    pub fn empty(node_count: usize) -> Self {
        StationPlan {
            open: vec![false; node_count],
        }
    }

    pub fn from_indices(node_count: usize, nodes: impl IntoIterator<Item = usize>) -> Self {
        let mut plan = Self::empty(node_count);
        for ix in nodes {
            plan.open[ix] = true;
        }
        plan
    }

    pub fn from_mask(open: Vec<bool>) -> Self {
        StationPlan { open }
    }

    pub fn from_ids(net: &Network, ids: impl IntoIterator<Item = NodeId>) -> Result<Self, RefuelError> {
        let mut plan = Self::empty(net.node_count());
        for id in ids {
            let ix = net.index_of(id).ok_or(RefuelError::UnknownNode(id))?;
            plan.open[ix] = true;
        }
        Ok(plan)
    }

    #[inline]
    pub fn is_open(&self, ix: usize) -> bool {
        self.open[ix]
    }

    pub fn open(&mut self, ix: usize) {
        self.open[ix] = true;
    }

    pub fn close(&mut self, ix: usize) {
        self.open[ix] = false;
    }

    pub fn mask(&self) -> &[bool] {
        &self.open
    }

    pub fn node_count(&self) -> usize {
        self.open.len()
    }

    /// Number of open stations.
    pub fn len(&self) -> usize {
        self.open.iter().filter(|&&o| o).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.open.iter().any(|&o| o)
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.open.iter().enumerate().filter(|(_, &o)| o).map(|(i, _)| i)
    }

    pub fn ids(&self, net: &Network) -> Vec<NodeId> {
        self.indices().map(|ix| net.id(ix)).collect()
    }

    pub fn is_subset_of(&self, other: &StationPlan) -> bool {
        self.open.iter().zip(&other.open).all(|(&a, &b)| !a || b)
    }

    pub fn cost(&self, costs: &[f64]) -> f64 {
        self.indices().map(|ix| costs[ix]).sum()
    }

    /// Lexicographic order on the ascending list of open nodes, where a
    /// proper prefix sorts first.
    pub fn lex_cmp(&self, other: &StationPlan) -> Ordering {
        self.indices().cmp(other.indices())
    }
}

/// Fuel state at one visit of a round trip.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RefuelStop {
    pub position: usize,
    pub node: usize,
    /// Fuel on arrival (`B`).
    pub arrival: f64,
    /// Amount taken on at this visit (`l`).
    pub refueled: f64,
}

impl RefuelStop {
    pub fn departure(&self) -> f64 {
        self.arrival + self.refueled
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RefuelSchedule {
    pub stops: Vec<RefuelStop>,
}

impl RefuelSchedule {
    pub fn total_refueled(&self) -> f64 {
        self.stops.iter().map(|s| s.refueled).sum()
    }

    /// Number of visits with a positive refuel amount.
    pub fn refuel_count(&self) -> usize {
        self.stops.iter().filter(|s| s.refueled > 0.0).count()
    }

    pub fn to_csv(&self, net: &Network) -> String {
        let mut out = String::from("node,arrival_fuel,refueled,departure_fuel\n");
        for s in &self.stops {
            let _ = writeln!(out, "{},{},{},{}", net.id(s.node), s.arrival, s.refueled, s.departure());
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Simulation {
    pub feasible: bool,
    pub schedule: Option<RefuelSchedule>,
}

/// Drives the round trip with the fill-to-full policy.
///
/// Fuel starts at the initial level; every open station visited before the
/// end of the trip (the origin included) tops the tank up to the range.
pub fn simulate_path(path: &RoundTripPath, plan: &StationPlan, vehicle: &VehicleSpec) -> Simulation {
    let nodes = path.nodes();
    let last = nodes.len() - 1;
    let mut stops = Vec::with_capacity(nodes.len());
    let mut fuel = vehicle.initial_fuel;
    for (pos, &node) in nodes.iter().enumerate() {
        let arrival = fuel.max(0.0);
        let refueled = if pos < last && plan.is_open(node) {
            vehicle.range - arrival
        } else {
            0.0
        };
        stops.push(RefuelStop {
            position: pos,
            node,
            arrival,
            refueled,
        });
        if pos == last {
            break;
        }
        fuel = arrival + refueled - path.leg(pos);
        if fuel < -FEASIBILITY_SLACK {
            return Simulation {
                feasible: false,
                schedule: None,
            };
        }
    }
    Simulation {
        feasible: true,
        schedule: Some(RefuelSchedule { stops }),
    }
}

/// Feasibility from the spacing of open stations along the trip.
///
/// The first open station must be reachable on the initial fuel, every gap
/// between consecutive open stations and the final stretch home must fit in
/// the range, and with no station at all the whole trip must fit in the
/// initial fuel.
pub fn gap_profile(path: &RoundTripPath, plan: &StationPlan, vehicle: &VehicleSpec) -> bool {
    let nodes = path.nodes();
    let prefix = path.prefix();
    let last = nodes.len() - 1;
    let mut previous: Option<f64> = None;
    for pos in 0..last {
        if !plan.is_open(nodes[pos]) {
            continue;
        }
        let at = prefix[pos];
        let ok = match previous {
            None => at <= vehicle.initial_fuel + FEASIBILITY_SLACK,
            Some(prev) => at - prev <= vehicle.range + FEASIBILITY_SLACK,
        };
        if !ok {
            return false;
        }
        previous = Some(at);
    }
    match previous {
        None => prefix[last] <= vehicle.initial_fuel + FEASIBILITY_SLACK,
        Some(prev) => prefix[last] - prev <= vehicle.range + FEASIBILITY_SLACK,
    }
}

/// Reference feasibility check: propagates the interval of achievable fuel
/// levels through the trip, allowing any refuel amount at open stations.
pub fn feasibility_oracle_dp(path: &RoundTripPath, plan: &StationPlan, vehicle: &VehicleSpec) -> bool {
    let nodes = path.nodes();
    // achievable arrival fuel is [low, high]
    let (mut low, mut high) = (vehicle.initial_fuel, vehicle.initial_fuel);
    for pos in 0..nodes.len() - 1 {
        if plan.is_open(nodes[pos]) {
            // any amount in [0, range - B] may be taken on
            high = vehicle.range.max(high);
        }
        let d = path.leg(pos);
        high -= d;
        low -= d;
        if high < -FEASIBILITY_SLACK {
            return false;
        }
        low = low.max(0.0);
        high = high.max(low);
    }
    true
}
