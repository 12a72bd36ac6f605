//! Steady-state genetic algorithm over station bitstrings.
//!
//! Each generation breeds children by binary tournament selection and
//! fitness-weighted fusion crossover, adds mutants of the worst member,
//! repairs every child to the budget, and swaps the best distinct children
//! in for the worst members of the population.

use std::fmt::Write as _;
use std::time::Instant;

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::coverage::Instance;
use crate::exact::{greedy_plan, singleton_gains, SolveResult, OBJECTIVE_EPS};
use crate::refuel::StationPlan;

#[derive(Debug, Error, PartialEq)]
pub enum GaError {
    #[error("population must hold at least 4 individuals, got {0}")]
    Population(usize),
    #[error("mutation rate must lie in [0, 1], got {0}")]
    MutationRate(f64),
    #[error("at least one child per generation is required")]
    Children,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossoverMode {
    /// Each differing gene is inherited from one parent with probability
    /// given by the other parent's share of the total fitness.
    PerGene,
    /// The same rule applied once to pick a whole parent.
    WholeSolution,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaConfig {
    pub population: usize,
    pub generations: usize,
    /// Crossover children per generation; each comes with one mutant.
    pub children: usize,
    /// Per-bit flip probability; `None` means `2 / candidates`.
    pub mutation_rate: Option<f64>,
    pub seed: u64,
    pub crossover: CrossoverMode,
    /// Put the greedy plan into the initial population.
    pub seed_greedy: bool,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            population: 100,
            generations: 200,
            children: 10,
            mutation_rate: None,
            seed: 0,
            crossover: CrossoverMode::PerGene,
            seed_greedy: true,
        }
    }
}

impl GaConfig {
    pub fn validate(&self) -> Result<(), GaError> {
        if self.population < 4 {
            return Err(GaError::Population(self.population));
        }
        if let Some(p) = self.mutation_rate {
            if !(0.0..=1.0).contains(&p) {
                return Err(GaError::MutationRate(p));
            }
        }
        if self.children == 0 {
            return Err(GaError::Children);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    /// One gene per candidate site, in ascending candidate order.
    pub bits: Vec<bool>,
    pub plan: StationPlan,
    pub fitness: f64,
}

/// Instance data shared by the operators: candidate order and the singleton
/// gains used to decide which station to drop when over budget.
pub struct GaContext<'a> {
    inst: &'a Instance,
    candidates: Vec<usize>,
    gains: Vec<f64>,
}

impl<'a> GaContext<'a> {
    pub fn new(inst: &'a Instance) -> Self {
        GaContext {
            inst,
            candidates: inst.candidates(),
            gains: singleton_gains(inst),
        }
    }

    pub fn genes(&self) -> usize {
        self.candidates.len()
    }

    pub fn plan_of(&self, bits: &[bool]) -> StationPlan {
        StationPlan::from_indices(
            self.inst.node_count(),
            bits.iter().zip(&self.candidates).filter(|(&b, _)| b).map(|(_, &ix)| ix),
        )
    }

    pub fn bits_of(&self, plan: &StationPlan) -> Vec<bool> {
        self.candidates.iter().map(|&ix| plan.is_open(ix)).collect()
    }

    /// Closes open stations until the plan fits the budget, each time
    /// dropping the one with the smallest singleton gain (random among
    /// ties).
    pub fn repair_budget<R: Rng>(&self, bits: &[bool], rng: &mut R) -> StationPlan {
        let mut plan = self.plan_of(bits);
        let mut cost = self.inst.plan_cost(&plan);
        while !self.inst.within_budget(cost) {
            let open: Vec<usize> = plan.indices().collect();
            let lowest = open.iter().map(|&ix| self.gains[ix]).fold(f64::INFINITY, f64::min);
            let ties: Vec<usize> = open
                .into_iter()
                .filter(|&ix| self.gains[ix] <= lowest + OBJECTIVE_EPS)
                .collect();
            let drop = *ties.choose(rng).expect("an over-budget plan has open stations");
            plan.close(drop);
            cost -= self.inst.costs()[drop];
        }
        plan
    }

    /// Repairs and scores a bitstring.
    pub fn individual<R: Rng>(&self, bits: &[bool], rng: &mut R) -> Individual {
        let plan = self.repair_budget(bits, rng);
        Individual {
            bits: self.bits_of(&plan),
            fitness: self.inst.objective(&plan),
            plan,
        }
    }

    /// Random plan that keeps adding shuffled candidates while they fit.
    fn saturated<R: Rng>(&self, rng: &mut R) -> Individual {
        let mut order: Vec<usize> = (0..self.genes()).collect();
        order.shuffle(rng);
        let mut bits = vec![false; self.genes()];
        let mut cost = 0.0;
        for g in order {
            let c = self.inst.costs()[self.candidates[g]];
            if self.inst.within_budget(cost + c) {
                bits[g] = true;
                cost += c;
            }
        }
        self.individual(&bits, rng)
    }
}

/// Draws four distinct members, pairs them into two pools and returns the
/// index of the fitter member of each pool (the first drawn on ties).
pub fn tournament_select<R: Rng>(population: &[Individual], rng: &mut R) -> (usize, usize) {
    assert!(population.len() >= 4, "tournament needs four distinct members");
    let picks = sample(rng, population.len(), 4).into_vec();
    let winner = |a: usize, b: usize| {
        if population[b].fitness > population[a].fitness {
            b
        } else {
            a
        }
    };
    (winner(picks[0], picks[1]), winner(picks[2], picks[3]))
}

/// Probability that the child takes the first parent's gene.
fn first_parent_share(f1: f64, f2: f64) -> f64 {
    if f1 + f2 > 0.0 {
        f2 / (f1 + f2)
    } else {
        0.5
    }
}

/// Fitness-based fusion crossover, gene by gene.
///
/// Genes where the parents agree are copied; elsewhere the child takes the
/// first parent's gene with probability `f2 / (f1 + f2)`.
pub fn fusion_crossover<R: Rng>(p1: &[bool], f1: f64, p2: &[bool], f2: f64, rng: &mut R) -> Vec<bool> {
    let share = first_parent_share(f1, f2);
    p1.iter()
        .zip(p2)
        .map(|(&a, &b)| if a == b || rng.gen::<f64>() < share { a } else { b })
        .collect()
}

/// Whole-solution variant: the child is a copy of one parent.
pub fn whole_solution_crossover<R: Rng>(p1: &[bool], f1: f64, p2: &[bool], f2: f64, rng: &mut R) -> Vec<bool> {
    if p1 == p2 || rng.gen::<f64>() < first_parent_share(f1, f2) {
        p1.to_vec()
    } else {
        p2.to_vec()
    }
}

fn worst_index(population: &[Individual]) -> usize {
    population
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.fitness.total_cmp(&b.1.fitness))
        .map(|(i, _)| i)
        .expect("population is nonempty")
}

/// Copies the worst member and flips each bit when a uniform draw falls
/// below `rate`.
pub fn mutate_worst<R: Rng>(population: &[Individual], rate: f64, rng: &mut R) -> Vec<bool> {
    let worst = &population[worst_index(population)];
    worst.bits.iter().map(|&b| if rng.gen::<f64>() < rate { !b } else { b }).collect()
}

/// Drops children whose repaired plan already appears in the population
/// (or among earlier children), then lets the best `limit` survivors replace
/// the worst members one for one. Returns how many were inserted.
///
/// At most `population - 1` members are replaced, so the best member always
/// survives.
pub fn replace(population: &mut [Individual], children: Vec<Individual>, limit: usize) -> usize {
    let mut survivors: Vec<Individual> = Vec::new();
    for child in children {
        let seen = population.iter().chain(survivors.iter()).any(|m| m.plan == child.plan);
        if !seen {
            survivors.push(child);
        }
    }
    survivors.sort_by(|a, b| b.fitness.total_cmp(&a.fitness));
    survivors.truncate(limit.min(population.len() - 1));

    let mut order: Vec<usize> = (0..population.len()).collect();
    order.sort_by(|&a, &b| population[a].fitness.total_cmp(&population[b].fitness));
    let count = survivors.len();
    for (slot, child) in order.into_iter().zip(survivors) {
        population[slot] = child;
    }
    count
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenerationStats {
    pub generation: usize,
    pub best: f64,
    pub mean: f64,
    pub worst: f64,
}

impl GenerationStats {
    fn of(generation: usize, population: &[Individual]) -> Self {
        let fits = population.iter().map(|m| m.fitness);
        GenerationStats {
            generation,
            best: fits.clone().fold(f64::NEG_INFINITY, f64::max),
            mean: fits.clone().sum::<f64>() / population.len() as f64,
            worst: fits.fold(f64::INFINITY, f64::min),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GaRun {
    pub result: SolveResult,
    pub log: Vec<GenerationStats>,
}

impl GaRun {
    /// Convergence log as `generation,best,mean,worst`.
    pub fn log_csv(&self) -> String {
        let mut out = String::from("generation,best,mean,worst\n");
        for s in &self.log {
            let _ = writeln!(out, "{},{},{},{}", s.generation, s.best, s.mean, s.worst);
        }
        out
    }
}

fn initial_population<R: Rng>(ctx: &GaContext, cfg: &GaConfig, rng: &mut R) -> Vec<Individual> {
    let mut population: Vec<Individual> = Vec::with_capacity(cfg.population);
    if cfg.seed_greedy {
        let plan = greedy_plan(ctx.inst);
        let bits = ctx.bits_of(&plan);
        population.push(ctx.individual(&bits, rng));
    }
    let mut attempts = 0;
    while population.len() < cfg.population {
        let member = ctx.saturated(rng);
        attempts += 1;
        // prefer distinct members, but small candidate sets may not have enough
        if attempts < 20 * cfg.population && population.iter().any(|m| m.plan == member.plan) {
            continue;
        }
        population.push(member);
    }
    population
}

pub fn run_ga(inst: &Instance, cfg: &GaConfig) -> Result<SolveResult, GaError> {
    run_ga_logged(inst, cfg).map(|run| run.result)
}

/// Runs the GA and keeps per-generation fitness statistics.
pub fn run_ga_logged(inst: &Instance, cfg: &GaConfig) -> Result<GaRun, GaError> {
    cfg.validate()?;
    let start = Instant::now();
    let ctx = GaContext::new(inst);
    let rate = cfg.mutation_rate.unwrap_or_else(|| (2.0 / ctx.genes() as f64).min(1.0));
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut population = initial_population(&ctx, cfg, &mut rng);
    let mut evaluations = population.len() as u64;
    let mut log = vec![GenerationStats::of(0, &population)];

    for generation in 1..=cfg.generations {
        let mut children = Vec::with_capacity(2 * cfg.children);
        for _ in 0..cfg.children {
            let (a, b) = tournament_select(&population, &mut rng);
            let (p1, p2) = (&population[a], &population[b]);
            let bits = match cfg.crossover {
                CrossoverMode::PerGene => fusion_crossover(&p1.bits, p1.fitness, &p2.bits, p2.fitness, &mut rng),
                CrossoverMode::WholeSolution => {
                    whole_solution_crossover(&p1.bits, p1.fitness, &p2.bits, p2.fitness, &mut rng)
                }
            };
            children.push(ctx.individual(&bits, &mut rng));
            let mutant = mutate_worst(&population, rate, &mut rng);
            children.push(ctx.individual(&mutant, &mut rng));
        }
        evaluations += children.len() as u64;
        replace(&mut population, children, cfg.children);
        log.push(GenerationStats::of(generation, &population));
    }

    let best_fitness = population.iter().map(|m| m.fitness).fold(f64::NEG_INFINITY, f64::max);
    let best = population
        .iter()
        .filter(|m| m.fitness >= best_fitness - OBJECTIVE_EPS)
        .min_by(|a, b| a.plan.lex_cmp(&b.plan))
        .expect("population is nonempty");
    Ok(GaRun {
        result: SolveResult {
            plan: best.plan.clone(),
            objective: best.fitness,
            proven_optimal: false,
            nodes_explored: evaluations,
            elapsed: start.elapsed(),
        },
        log,
    })
}
