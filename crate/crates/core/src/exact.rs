//! Exact maximization of expected coverage under the station budget.
//!
//! Coverage is monotone in the plan, so the objective of the current
//! choices plus every still-affordable remaining candidate bounds any
//! completion of a search node. The search runs depth first over candidates
//! ordered by their singleton gain, starting from the greedy plan as
//! incumbent, and finishes with a pass that returns the lexicographically
//! smallest optimal plan.

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::coverage::Instance;
use crate::refuel::StationPlan;

/// Objective differences below this are ties.
pub const OBJECTIVE_EPS: f64 = 1e-9;

/// Largest candidate set `brute_force` accepts.
pub const BRUTE_FORCE_LIMIT: usize = 16;

#[derive(Debug, Error, PartialEq)]
pub enum ExactError {
    #[error("brute force limited to {limit} candidates, instance has {got}")]
    TooManyCandidates { limit: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub plan: StationPlan,
    pub objective: f64,
    /// False when a search limit stopped the solver early.
    pub proven_optimal: bool,
    pub nodes_explored: u64,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Default)]
pub struct ExactOptions {
    /// Abort after this many search nodes; the incumbent is returned
    /// without an optimality proof.
    pub node_limit: Option<u64>,
}

/// Objective gain of opening each candidate alone, indexed by dense node
/// (zero for non-candidates).
pub fn singleton_gains(inst: &Instance) -> Vec<f64> {
    let base = inst.objective(&inst.empty_plan());
    let mut gains = vec![0.0; inst.node_count()];
    for ix in inst.candidates() {
        let plan = StationPlan::from_indices(inst.node_count(), [ix]);
        gains[ix] = inst.objective(&plan) - base;
    }
    gains
}

/// Repeatedly opens the affordable candidate with the largest marginal
/// gain (lowest index on ties) until nothing else fits.
pub fn greedy_plan(inst: &Instance) -> StationPlan {
    let mut plan = inst.empty_plan();
    let mut spent = 0.0;
    let mut value = inst.objective(&plan);
    loop {
        let mut best: Option<(usize, f64)> = None;
        for ix in inst.candidates() {
            if plan.is_open(ix) || !inst.within_budget(spent + inst.costs()[ix]) {
                continue;
            }
            plan.open(ix);
            let v = inst.objective(&plan);
            plan.close(ix);
            if best.is_none_or(|(_, b)| v > b + OBJECTIVE_EPS) {
                best = Some((ix, v));
            }
        }
        match best {
            Some((ix, v)) => {
                plan.open(ix);
                spent += inst.costs()[ix];
                value = v;
            }
            None => break,
        }
    }
    debug_assert!((inst.objective(&plan) - value).abs() < 1e-12);
    plan
}

struct Search<'a> {
    inst: &'a Instance,
    order: Vec<usize>,
    best: StationPlan,
    best_value: f64,
    nodes: u64,
    limit: Option<u64>,
    aborted: bool,
}

/// Optimistic completion of a partial plan: adds every candidate in
/// `remaining` that fits the leftover budget on its own. The objective of the
/// result bounds every budget-feasible extension of `chosen` by members of
/// `remaining`. The flag reports whether the added stations fit together, in
/// which case the bound is attained.
pub fn optimistic_completion(inst: &Instance, chosen: &StationPlan, remaining: &[usize]) -> (StationPlan, bool) {
    let spent = inst.plan_cost(chosen);
    let mut plan = chosen.clone();
    let mut total = spent;
    for &ix in remaining {
        let c = inst.costs()[ix];
        if inst.within_budget(spent + c) {
            plan.open(ix);
            total += c;
        }
    }
    (plan, inst.within_budget(total))
}

impl Search<'_> {
    fn explore(&mut self, depth: usize, chosen: &mut StationPlan, spent: f64) {
        if self.aborted {
            return;
        }
        self.nodes += 1;
        if self.limit.is_some_and(|l| self.nodes > l) {
            self.aborted = true;
            return;
        }
        let (upper, attained) = optimistic_completion(self.inst, chosen, &self.order[depth..]);
        let bound = self.inst.objective(&upper);
        if bound <= self.best_value + OBJECTIVE_EPS {
            return;
        }
        if attained {
            self.best_value = bound;
            self.best = upper;
            return;
        }
        let ix = self.order[depth];
        let cost = self.inst.costs()[ix];
        if self.inst.within_budget(spent + cost) {
            chosen.open(ix);
            self.explore(depth + 1, chosen, spent + cost);
            chosen.close(ix);
        }
        self.explore(depth + 1, chosen, spent);
    }
}

/// Finds the lexicographically smallest plan reaching `target`.
struct LexSearch<'a> {
    inst: &'a Instance,
    candidates: Vec<usize>,
    target: f64,
    nodes: u64,
}

impl LexSearch<'_> {
    fn find(&mut self, start: usize, chosen: &mut StationPlan, spent: f64) -> bool {
        self.nodes += 1;
        if self.inst.objective(chosen) >= self.target {
            return true;
        }
        let mut upper = chosen.clone();
        for &ix in &self.candidates[start..] {
            if self.inst.within_budget(spent + self.inst.costs()[ix]) {
                upper.open(ix);
            }
        }
        if upper == *chosen || self.inst.objective(&upper) < self.target {
            return false;
        }
        for j in start..self.candidates.len() {
            let ix = self.candidates[j];
            let cost = self.inst.costs()[ix];
            if !self.inst.within_budget(spent + cost) {
                continue;
            }
            chosen.open(ix);
            if self.find(j + 1, chosen, spent + cost) {
                return true;
            }
            chosen.close(ix);
        }
        false
    }
}

pub fn solve_exact(inst: &Instance) -> SolveResult {
    solve_exact_with(inst, &ExactOptions::default())
}

pub fn solve_exact_with(inst: &Instance, options: &ExactOptions) -> SolveResult {
    let start = Instant::now();
    let gains = singleton_gains(inst);
    let mut order = inst.candidates();
    order.sort_by(|&a, &b| gains[b].total_cmp(&gains[a]).then(a.cmp(&b)));

    let incumbent = greedy_plan(inst);
    let incumbent_value = inst.objective(&incumbent);
    let mut search = Search {
        inst,
        order,
        best: incumbent,
        best_value: incumbent_value,
        nodes: 0,
        limit: options.node_limit,
        aborted: false,
    };
    let mut chosen = inst.empty_plan();
    search.explore(0, &mut chosen, 0.0);

    let mut plan = search.best;
    let mut nodes = search.nodes;
    if !search.aborted {
        let mut lex = LexSearch {
            inst,
            candidates: inst.candidates(),
            target: search.best_value - OBJECTIVE_EPS,
            nodes: 0,
        };
        let mut chosen = inst.empty_plan();
        if lex.find(0, &mut chosen, 0.0) {
            plan = chosen;
        }
        nodes += lex.nodes;
    }
    SolveResult {
        objective: inst.objective(&plan),
        plan,
        proven_optimal: !search.aborted,
        nodes_explored: nodes,
        elapsed: start.elapsed(),
    }
}

/// Enumerates every budget-feasible subset of the candidates.
///
/// Ties within [`OBJECTIVE_EPS`] go to the lexicographically smallest plan.
pub fn brute_force(inst: &Instance) -> Result<SolveResult, ExactError> {
    let start = Instant::now();
    let candidates = inst.candidates();
    if candidates.len() > BRUTE_FORCE_LIMIT {
        return Err(ExactError::TooManyCandidates {
            limit: BRUTE_FORCE_LIMIT,
            got: candidates.len(),
        });
    }
    let mut scored: Vec<(StationPlan, f64)> = Vec::new();
    for mask in 0u32..(1u32 << candidates.len()) {
        let plan = StationPlan::from_indices(
            inst.node_count(),
            candidates
                .iter()
                .enumerate()
                .filter(|(bit, _)| mask >> bit & 1 == 1)
                .map(|(_, &ix)| ix),
        );
        if !inst.within_budget(inst.plan_cost(&plan)) {
            continue;
        }
        let value = inst.objective(&plan);
        scored.push((plan, value));
    }
    let nodes = scored.len() as u64;
    let best_value = scored.iter().map(|(_, v)| *v).fold(f64::NEG_INFINITY, f64::max);
    let (plan, objective) = scored
        .into_iter()
        .filter(|(_, v)| *v >= best_value - OBJECTIVE_EPS)
        .min_by(|a, b| a.0.lex_cmp(&b.0))
        .expect("the empty plan is always affordable");
    Ok(SolveResult {
        plan,
        objective,
        proven_optimal: true,
        nodes_explored: nodes,
        elapsed: start.elapsed(),
    })
}
