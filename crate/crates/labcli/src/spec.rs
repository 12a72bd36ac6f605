//! Experiment settings: defaults, a flat `key = value` config file, and
//! command-line overrides on top.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use afs_core::ga::CrossoverMode;
use afs_core::GaConfig;

use crate::LabError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Solver {
    Exact,
    Ga,
    Both,
}

impl Solver {
    pub fn runs_exact(self) -> bool {
        matches!(self, Solver::Exact | Solver::Both)
    }

    pub fn runs_ga(self) -> bool {
        matches!(self, Solver::Ga | Solver::Both)
    }
}

impl FromStr for Solver {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self, LabError> {
        match s {
            "exact" => Ok(Solver::Exact),
            "ga" => Ok(Solver::Ga),
            "both" => Ok(Solver::Both),
            _ => Err(LabError::Validation(format!("unknown solver `{s}` (exact, ga or both)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    /// Network file; the embedded Sioux Falls network when unset.
    pub network: Option<PathBuf>,
    /// `node_id,probability` file; embedded values for the embedded network,
    /// otherwise every probability is 1.
    pub probs: Option<PathBuf>,
    pub budgets: Vec<u32>,
    /// Vehicle ranges in miles; commands that sweep ranges default to
    /// 100, 150 and 200 when unset.
    pub ranges: Option<Vec<f64>>,
    /// Initial fuel as fractions of the range; sweeps default to 1 and 0.5.
    pub sofs: Option<Vec<f64>>,
    pub k: usize,
    pub solver: Solver,
    pub seeds: usize,
    pub seed: u64,
    pub out: PathBuf,
    /// Monte-Carlo draws per budget.
    pub samples: usize,
    /// Draw one initial fuel level per origin instead of one per scenario.
    pub per_node_sof: bool,
    /// Budget for the empirical CDF.
    pub cdf_budget: u32,
    /// Budget for the per-node breakdown table.
    pub detail_budget: u32,
    /// Budget for the realized routes and schedules.
    pub route_budget: u32,
    /// Pair whose schedule is written as CSV.
    pub pair: (u32, u32),
    /// Replace every probability by 1.
    pub unit_probs: bool,
    pub population: usize,
    pub generations: usize,
    pub children: usize,
    pub mutation_rate: Option<f64>,
    pub whole_crossover: bool,
    /// Branch-and-bound node cap; exceeding it is a solver failure.
    pub node_limit: Option<u64>,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        let ga = GaConfig::default();
        ExperimentSpec {
            network: None,
            probs: None,
            budgets: (1..=12).collect(),
            ranges: None,
            sofs: None,
            k: 3,
            solver: Solver::Exact,
            seeds: 50,
            seed: 0,
            out: PathBuf::from("out"),
            samples: 100,
            per_node_sof: false,
            cdf_budget: 7,
            detail_budget: 3,
            route_budget: 7,
            pair: (1, 21),
            unit_probs: false,
            population: ga.population,
            generations: ga.generations,
            children: ga.children,
            mutation_rate: ga.mutation_rate,
            whole_crossover: false,
            node_limit: None,
        }
    }
}

/// Settings keyed by their long flag name without the dashes, with `-` and
/// `_` interchangeable.
pub type Settings = BTreeMap<String, String>;

pub fn normalize_key(key: &str) -> String {
    key.trim().trim_start_matches("--").replace('-', "_")
}

/// Reads `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<Settings, LabError> {
    let mut out = Settings::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| LabError::Validation(format!("config line {}: expected `key = value`", i + 1)))?;
        out.insert(normalize_key(key), value.trim().to_string());
    }
    Ok(out)
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, LabError> {
    value
        .trim()
        .parse()
        .map_err(|_| LabError::Validation(format!("invalid value `{value}` for `{key}`")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool, LabError> {
    match value.trim() {
        "1" | "true" | "yes" | "on" => Ok(true),
        "0" | "false" | "no" | "off" => Ok(false),
        _ => Err(LabError::Validation(format!("invalid value `{value}` for `{key}`"))),
    }
}

fn parse_list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>, LabError> {
    value.split(',').map(|v| parse(key, v)).collect()
}

/// `a..b` (inclusive), a single number, or a comma list.
pub fn parse_budgets(value: &str) -> Result<Vec<u32>, LabError> {
    if let Some((a, b)) = value.split_once("..") {
        let a: u32 = parse("budgets", a)?;
        let b: u32 = parse("budgets", b.trim_start_matches('='))?;
        if a > b {
            return Err(LabError::Validation(format!("empty budget range `{value}`")));
        }
        return Ok((a..=b).collect());
    }
    parse_list("budgets", value)
}

impl ExperimentSpec {
    pub fn apply(&mut self, settings: &Settings) -> Result<(), LabError> {
        for (key, value) in settings {
            let v = value.as_str();
            match key.as_str() {
                "network" => self.network = Some(PathBuf::from(v)),
                "probs" => self.probs = Some(PathBuf::from(v)),
                "budget" | "budgets" => self.budgets = parse_budgets(v)?,
                "range" | "ranges" => self.ranges = Some(parse_list(key, v)?),
                "sof" | "sofs" => self.sofs = Some(parse_list(key, v)?),
                "k" => self.k = parse(key, v)?,
                "solver" => self.solver = v.parse()?,
                "seeds" => self.seeds = parse(key, v)?,
                "seed" => self.seed = parse(key, v)?,
                "out" => self.out = PathBuf::from(v),
                "samples" => self.samples = parse(key, v)?,
                "per_node_sof" => self.per_node_sof = parse_bool(key, v)?,
                "cdf_budget" => self.cdf_budget = parse(key, v)?,
                "detail_budget" => self.detail_budget = parse(key, v)?,
                "route_budget" => self.route_budget = parse(key, v)?,
                "pair" => {
                    let ids: Vec<u32> = parse_list(key, v)?;
                    let [r, s] = ids[..] else {
                        return Err(LabError::Validation(format!("`pair` needs two node ids, got `{v}`")));
                    };
                    self.pair = (r, s);
                }
                "unit_probs" => self.unit_probs = parse_bool(key, v)?,
                "population" => self.population = parse(key, v)?,
                "generations" => self.generations = parse(key, v)?,
                "children" => self.children = parse(key, v)?,
                "mutation_rate" => self.mutation_rate = Some(parse(key, v)?),
                "whole_crossover" => self.whole_crossover = parse_bool(key, v)?,
                "node_limit" => self.node_limit = Some(parse(key, v)?),
                _ => return Err(LabError::Validation(format!("unknown setting `{key}`"))),
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), LabError> {
        let fail = |msg: &str| Err(LabError::Validation(msg.to_string()));
        if self.budgets.is_empty() {
            return fail("budget list is empty");
        }
        if self.ranges.as_ref().is_some_and(|r| r.is_empty() || r.iter().any(|&x| !(x > 0.0))) {
            return fail("ranges must be positive");
        }
        if self
            .sofs
            .as_ref()
            .is_some_and(|s| s.is_empty() || s.iter().any(|x| !(0.0..=1.0).contains(x)))
        {
            return fail("initial fuel fractions must lie in [0, 1]");
        }
        if self.k == 0 {
            return fail("k must be at least 1");
        }
        if self.seeds == 0 {
            return fail("seeds must be at least 1");
        }
        if self.samples == 0 {
            return fail("samples must be at least 1");
        }
        self.ga_config(0).validate().map_err(|e| LabError::Validation(e.to_string()))
    }

    pub fn ga_config(&self, seed: u64) -> GaConfig {
        GaConfig {
            population: self.population,
            generations: self.generations,
            children: self.children,
            mutation_rate: self.mutation_rate,
            seed,
            crossover: if self.whole_crossover {
                CrossoverMode::WholeSolution
            } else {
                CrossoverMode::PerGene
            },
            seed_greedy: true,
        }
    }

    pub fn range_list(&self, default: &[f64]) -> Vec<f64> {
        self.ranges.clone().unwrap_or_else(|| default.to_vec())
    }

    pub fn sof_list(&self, default: &[f64]) -> Vec<f64> {
        self.sofs.clone().unwrap_or_else(|| default.to_vec())
    }
}
