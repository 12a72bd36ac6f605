//! Experiment commands. Each writes its tables under the output directory
//! and returns the numbers it wrote.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use afs_core::dataset::{load_probabilities, sioux_falls_network, sioux_falls_probabilities};
use afs_core::exact::{solve_exact_with, ExactOptions};
use afs_core::milp::{export_milp, MilpSize};
use afs_core::{build_catalog, evaluate_plan, objective_ceiling, run_ga, Instance, Network, PathCatalog, SolveResult};
use afs_core::{StationPlan, VehicleSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::spec::ExperimentSpec;
use crate::LabError;

const OBJECTIVE_EPS: f64 = 1e-9;

/// Network, catalog and probabilities shared by every instance of a run.
#[derive(Debug, Clone)]
pub struct Setup {
    pub network: Arc<Network>,
    pub catalog: Arc<PathCatalog>,
    pub probabilities: Vec<f64>,
}

impl Setup {
    pub fn load(spec: &ExperimentSpec) -> Result<Self, LabError> {
        let network = match &spec.network {
            Some(path) => Network::parse(&read(path)?)?,
            None => sioux_falls_network(),
        };
        let probabilities = match (&spec.probs, &spec.network) {
            _ if spec.unit_probs => vec![1.0; network.node_count()],
            (Some(path), _) => load_probabilities(&read(path)?, &network)?,
            (None, None) => sioux_falls_probabilities(&network),
            (None, Some(_)) => vec![1.0; network.node_count()],
        };
        let catalog = build_catalog(&network, spec.k, None)?;
        Ok(Setup {
            network: Arc::new(network),
            catalog: Arc::new(catalog),
            probabilities,
        })
    }

    /// Instance with the given range, initial fuel fraction and budget.
    pub fn instance(&self, range: f64, sof: f64, budget: f64) -> Result<Instance, LabError> {
        let vehicle = VehicleSpec::with_initial_fraction(range, sof)?;
        Ok(Instance::new(self.network.clone(), self.catalog.clone(), vehicle)?
            .with_probabilities(self.probabilities.clone())?
            .with_budget(budget)?)
    }
}

fn read(path: &Path) -> Result<String, LabError> {
    fs::read_to_string(path).map_err(|e| LabError::Validation(format!("cannot read {}: {e}", path.display())))
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, LabError> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, contents)?;
    Ok(path)
}

/// Node ids of a plan, space separated.
pub fn plan_ids(net: &Network, plan: &StationPlan) -> String {
    plan.ids(net).iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}

/// Heuristic runs for one instance.
#[derive(Debug, Clone)]
pub struct GaSummary {
    pub runs: Vec<SolveResult>,
    pub mean: f64,
    pub mean_seconds: f64,
}

impl GaSummary {
    pub fn best(&self) -> &SolveResult {
        self.runs
            .iter()
            .reduce(|a, b| if b.objective > a.objective + OBJECTIVE_EPS { b } else { a })
            .expect("at least one run")
    }
}

/// Solver output for one instance.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub budget: u32,
    pub exact: Option<SolveResult>,
    pub ga: Option<GaSummary>,
}

impl Outcome {
    /// The plan reported for this instance: exact when available, otherwise
    /// the best heuristic run.
    pub fn plan(&self) -> &StationPlan {
        match (&self.exact, &self.ga) {
            (Some(e), _) => &e.plan,
            (None, Some(g)) => &g.best().plan,
            (None, None) => unreachable!("a solver always runs"),
        }
    }

    pub fn objective(&self) -> f64 {
        match (&self.exact, &self.ga) {
            (Some(e), _) => e.objective,
            (None, Some(g)) => g.best().objective,
            (None, None) => unreachable!("a solver always runs"),
        }
    }

    /// Relative shortfall of the heuristic mean, in percent.
    pub fn difference_pct(&self) -> Option<f64> {
        let exact = self.exact.as_ref()?.objective;
        let mean = self.ga.as_ref()?.mean;
        Some(if exact > 0.0 { (exact - mean) / exact * 100.0 } else { 0.0 })
    }
}

pub fn solve(inst: &Instance, budget: u32, spec: &ExperimentSpec) -> Result<Outcome, LabError> {
    let exact = if spec.solver.runs_exact() {
        let res = solve_exact_with(inst, &ExactOptions { node_limit: spec.node_limit });
        if !res.proven_optimal {
            return Err(LabError::Solver(format!(
                "branch and bound stopped after {} nodes at budget {budget}",
                res.nodes_explored
            )));
        }
        Some(res)
    } else {
        None
    };
    let ga = if spec.solver.runs_ga() {
        let runs: Vec<SolveResult> = (0..spec.seeds as u64)
            .into_par_iter()
            .map(|i| run_ga(inst, &spec.ga_config(spec.seed + i)))
            .collect::<Result<_, _>>()
            .map_err(|e| LabError::Validation(e.to_string()))?;
        let count = runs.len() as f64;
        Some(GaSummary {
            mean: runs.iter().map(|r| r.objective).sum::<f64>() / count,
            mean_seconds: runs.iter().map(|r| r.elapsed.as_secs_f64()).sum::<f64>() / count,
            runs,
        })
    } else {
        None
    };
    Ok(Outcome { budget, exact, ga })
}

fn fmt_opt(v: Option<f64>, digits: usize) -> String {
    v.map(|x| format!("{x:.digits$}")).unwrap_or_default()
}

pub const TABLE2_HEADER: &str =
    "budget,heuristic_mean,heuristic_best,exact,difference_pct,plan,heuristic_seconds,exact_seconds";

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub outcomes: Vec<Outcome>,
    pub files: Vec<PathBuf>,
}

impl SolveReport {
    pub fn outcome(&self, budget: u32) -> Option<&Outcome> {
        self.outcomes.iter().find(|o| o.budget == budget)
    }
}

/// Budget sweep with the chosen solver(s): objective comparison table,
/// per-node breakdown, plans, and realized routes with refueling schedules.
pub fn cmd_solve(spec: &ExperimentSpec) -> Result<SolveReport, LabError> {
    spec.validate()?;
    let setup = Setup::load(spec)?;
    let range = spec.range_list(&[100.0])[0];
    let sof = spec.sof_list(&[1.0])[0];
    let net = setup.network.clone();

    let mut budgets: BTreeSet<u32> = spec.budgets.iter().copied().collect();
    budgets.insert(spec.detail_budget);
    budgets.insert(spec.route_budget);
    let outcomes: Vec<Outcome> = budgets
        .iter()
        .map(|&b| solve(&setup.instance(range, sof, b as f64)?, b, spec))
        .collect::<Result<_, _>>()?;
    let get = |b: u32| outcomes.iter().find(|o| o.budget == b).expect("solved");
    let mut files = Vec::new();

    let mut table = format!("{TABLE2_HEADER}\n");
    for &b in &spec.budgets {
        let o = get(b);
        let _ = writeln!(
            table,
            "{b},{},{},{},{},{},{},{}",
            fmt_opt(o.ga.as_ref().map(|g| g.mean), 6),
            fmt_opt(o.ga.as_ref().map(|g| g.best().objective), 6),
            fmt_opt(o.exact.as_ref().map(|e| e.objective), 6),
            fmt_opt(o.difference_pct(), 3),
            plan_ids(&net, o.plan()),
            fmt_opt(o.ga.as_ref().map(|g| g.mean_seconds), 4),
            fmt_opt(o.exact.as_ref().map(|e| e.elapsed.as_secs_f64()), 4),
        );
    }
    files.push(write(&spec.out, "table2.csv", &table)?);

    let detail = get(spec.detail_budget);
    let inst = setup.instance(range, sof, spec.detail_budget as f64)?;
    let report = evaluate_plan(&inst, detail.plan())?;
    files.push(write(&spec.out, "table3.csv", &report.to_csv(&inst))?);

    let plans: Vec<_> = outcomes
        .iter()
        .map(|o| {
            json!({
                "budget": o.budget,
                "plan": o.plan().ids(&net),
                "objective": o.objective(),
                "exact": o.exact.as_ref().map(|e| e.objective),
                "heuristic_mean": o.ga.as_ref().map(|g| g.mean),
            })
        })
        .collect();
    let plans = json!({ "range": range, "initial_fuel_fraction": sof, "k": spec.k, "plans": plans });
    files.push(write(&spec.out, "plans.json", &serde_json::to_string_pretty(&plans)?)?);

    let route = get(spec.route_budget);
    let inst = setup.instance(range, sof, spec.route_budget as f64)?;
    let report = evaluate_plan(&inst, route.plan())?;
    let mut pairs = Vec::new();
    for pair in &report.pairs {
        let (r, s) = (pair.origin, pair.destination);
        let path = pair.path_index.map(|k| inst.catalog().paths(r, s)[k].outbound().ids(&net));
        let schedule = report.schedule(&inst, r, s).map(|sched| {
            sched
                .stops
                .iter()
                .map(|st| {
                    json!({
                        "node": net.id(st.node),
                        "arrival_fuel": st.arrival,
                        "refueled": st.refueled,
                        "departure_fuel": st.departure(),
                    })
                })
                .collect::<Vec<_>>()
        });
        pairs.push(json!({
            "origin": net.id(r),
            "destination": net.id(s),
            "covered": pair.covered,
            "path_rank": pair.path_index.map(|k| k + 1),
            "path": path,
            "schedule": schedule,
        }));
    }
    let routes = json!({
        "budget": spec.route_budget,
        "plan": route.plan().ids(&net),
        "objective": report.objective,
        "pairs": pairs,
    });
    files.push(write(&spec.out, "routes.json", &serde_json::to_string_pretty(&routes)?)?);

    let (r_id, s_id) = spec.pair;
    if let (Some(r), Some(s)) = (net.index_of(r_id), net.index_of(s_id)) {
        if r != s {
            let csv = match report.schedule(&inst, r, s) {
                Some(sched) => sched.to_csv(&net),
                None => "node,arrival_fuel,refueled,departure_fuel\n".to_string(),
            };
            files.push(write(&spec.out, &format!("schedule_{r_id}_{s_id}.csv"), &csv)?);
        }
    }

    if spec.solver.runs_ga() {
        let log = afs_core::ga::run_ga_logged(&inst, &spec.ga_config(spec.seed))
            .map_err(|e| LabError::Validation(e.to_string()))?;
        files.push(write(&spec.out, "ga_log.csv", &log.log_csv())?);
    }

    Ok(SolveReport { outcomes, files })
}

/// One solved cell of a parameter sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub range: f64,
    pub sof: f64,
    pub budget: u32,
    pub objective: f64,
    pub plan: StationPlan,
}

fn sweep(setup: &Setup, spec: &ExperimentSpec, ranges: &[f64], sofs: &[f64]) -> Result<Vec<SweepCell>, LabError> {
    let mut jobs = Vec::new();
    for &range in ranges {
        for &sof in sofs {
            for &budget in &spec.budgets {
                jobs.push((range, sof, budget));
            }
        }
    }
    jobs.into_par_iter()
        .map(|(range, sof, budget)| {
            let inst = setup.instance(range, sof, budget as f64)?;
            let out = solve(&inst, budget, spec)?;
            Ok(SweepCell {
                range,
                sof,
                budget,
                objective: out.objective(),
                plan: out.plan().clone(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Critical {
    pub range: f64,
    /// Smallest budget reaching the best objective of the sweep.
    pub budget: u32,
    pub max_objective: f64,
    /// Whether that objective is the coverage ceiling.
    pub at_ceiling: bool,
}

#[derive(Debug, Clone)]
pub struct RangeReport {
    pub cells: Vec<SweepCell>,
    pub critical: Vec<Critical>,
    pub files: Vec<PathBuf>,
}

pub const SWEEP_RANGE_HEADER: &str = "range,budget,objective,plan";
pub const CRITICAL_HEADER: &str = "range,critical_budget,max_objective,at_ceiling";

/// Objective per (range, budget) and the critical station count per range.
pub fn cmd_sweep_range(spec: &ExperimentSpec) -> Result<RangeReport, LabError> {
    spec.validate()?;
    let setup = Setup::load(spec)?;
    let ranges = spec.range_list(&[100.0, 150.0, 200.0]);
    let sof = spec.sof_list(&[1.0])[0];
    let cells = sweep(&setup, spec, &ranges, &[sof])?;
    let net = &setup.network;

    let mut csv = format!("{SWEEP_RANGE_HEADER}\n");
    for c in &cells {
        let _ = writeln!(csv, "{},{},{:.6},{}", c.range, c.budget, c.objective, plan_ids(net, &c.plan));
    }
    let ceiling = objective_ceiling(&setup.instance(ranges[0], sof, 0.0)?);
    let mut critical = Vec::new();
    for &range in &ranges {
        let row: Vec<&SweepCell> = cells.iter().filter(|c| c.range == range).collect();
        let max = row.iter().map(|c| c.objective).fold(f64::NEG_INFINITY, f64::max);
        let budget = row
            .iter()
            .filter(|c| c.objective >= max - OBJECTIVE_EPS)
            .map(|c| c.budget)
            .min()
            .expect("nonempty budget list");
        critical.push(Critical {
            range,
            budget,
            max_objective: max,
            at_ceiling: max >= ceiling - OBJECTIVE_EPS,
        });
    }
    let mut crit_csv = format!("{CRITICAL_HEADER}\n");
    for c in &critical {
        let _ = writeln!(crit_csv, "{},{},{:.6},{}", c.range, c.budget, c.max_objective, c.at_ceiling);
    }
    let files = vec![
        write(&spec.out, "sweep_range.csv", &csv)?,
        write(&spec.out, "critical_stations.csv", &crit_csv)?,
    ];
    Ok(RangeReport { cells, critical, files })
}

#[derive(Debug, Clone)]
pub struct SofReport {
    pub cells: Vec<SweepCell>,
    pub files: Vec<PathBuf>,
}

pub const SWEEP_SOF_HEADER: &str = "sof,budget,objective,plan";

/// Objective per (initial fuel fraction, budget).
pub fn cmd_sweep_sof(spec: &ExperimentSpec) -> Result<SofReport, LabError> {
    spec.validate()?;
    let setup = Setup::load(spec)?;
    let range = spec.range_list(&[100.0])[0];
    let sofs = spec.sof_list(&[1.0, 0.5]);
    let cells = sweep(&setup, spec, &[range], &sofs)?;
    let mut csv = format!("{SWEEP_SOF_HEADER}\n");
    for c in &cells {
        let _ = writeln!(csv, "{},{},{:.6},{}", c.sof, c.budget, c.objective, plan_ids(&setup.network, &c.plan));
    }
    let files = vec![write(&spec.out, "sweep_sof.csv", &csv)?];
    Ok(SofReport { cells, files })
}

/// Objective of a plan when origin `r` starts with `fuel[r]`.
pub fn objective_with_origin_fuel(inst: &Instance, plan: &StationPlan, fuel: &[f64]) -> Result<f64, LabError> {
    let range = inst.vehicle().range();
    let mut total = 0.0;
    for (r, &f) in fuel.iter().enumerate() {
        let at_r = inst.clone().with_vehicle(VehicleSpec::new(range, f)?);
        total += inst.probabilities()[r] * at_r.origin_coverage(plan, r);
    }
    Ok(total)
}

#[derive(Debug, Clone)]
pub struct MonteCarloRow {
    pub budget: u32,
    /// One plan per design initial fuel fraction.
    pub plans: Vec<StationPlan>,
    pub design_objectives: Vec<f64>,
    /// Drawn initial fuel per scenario (mean over origins in per-node mode).
    pub draws: Vec<f64>,
    /// `values[j][d]`: objective of plan `j` under draw `d`.
    pub values: Vec<Vec<f64>>,
}

impl MonteCarloRow {
    pub fn means(&self) -> Vec<f64> {
        self.values
            .iter()
            .map(|v| v.iter().sum::<f64>() / v.len() as f64)
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct MonteCarloReport {
    pub sofs: Vec<f64>,
    pub rows: Vec<MonteCarloRow>,
    pub files: Vec<PathBuf>,
}

fn sof_column(sof: f64) -> String {
    format!("sof_{sof}")
}

/// Plans designed for fixed initial fuel levels, scored under random
/// initial fuel drawn uniformly from `[0, range)`.
pub fn cmd_monte_carlo_sof(spec: &ExperimentSpec) -> Result<MonteCarloReport, LabError> {
    spec.validate()?;
    let setup = Setup::load(spec)?;
    let range = spec.range_list(&[100.0])[0];
    let sofs = spec.sof_list(&[1.0, 0.5]);
    let n = setup.network.node_count();
    let mut budgets: BTreeSet<u32> = spec.budgets.iter().copied().collect();
    budgets.insert(spec.cdf_budget);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);

    let mut rows = Vec::new();
    for &budget in &budgets {
        let designs: Vec<Outcome> = sofs
            .iter()
            .map(|&sof| solve(&setup.instance(range, sof, budget as f64)?, budget, spec))
            .collect::<Result<_, _>>()?;
        let fuels: Vec<Vec<f64>> = (0..spec.samples)
            .map(|_| {
                if spec.per_node_sof {
                    (0..n).map(|_| rng.gen_range(0.0..range)).collect()
                } else {
                    vec![rng.gen_range(0.0..range); n]
                }
            })
            .collect();
        let base = setup.instance(range, 1.0, budget as f64)?;
        let values: Vec<Vec<f64>> = designs
            .iter()
            .map(|d| {
                fuels
                    .par_iter()
                    .map(|f| {
                        if spec.per_node_sof {
                            objective_with_origin_fuel(&base, d.plan(), f)
                        } else {
                            Ok(base.clone().with_vehicle(VehicleSpec::new(range, f[0])?).objective(d.plan()))
                        }
                    })
                    .collect::<Result<_, _>>()
            })
            .collect::<Result<_, _>>()?;
        rows.push(MonteCarloRow {
            budget,
            plans: designs.iter().map(|d| d.plan().clone()).collect(),
            design_objectives: designs.iter().map(Outcome::objective).collect(),
            draws: fuels.iter().map(|f| f.iter().sum::<f64>() / n as f64).collect(),
            values,
        });
    }

    let columns: Vec<String> = sofs.iter().map(|&s| sof_column(s)).collect();
    let net = &setup.network;
    let mut table = format!("budget,{}\n", columns.join(","));
    let mut plans = String::from("budget,design_sof,plan,design_objective\n");
    for row in rows.iter().filter(|r| spec.budgets.contains(&r.budget)) {
        let means: Vec<String> = row.means().iter().map(|m| format!("{m:.6}")).collect();
        let _ = writeln!(table, "{},{}", row.budget, means.join(","));
        for (j, &sof) in sofs.iter().enumerate() {
            let _ = writeln!(
                plans,
                "{},{sof},{},{:.6}",
                row.budget,
                plan_ids(net, &row.plans[j]),
                row.design_objectives[j]
            );
        }
    }

    let cdf_row = rows.iter().find(|r| r.budget == spec.cdf_budget).expect("cdf budget solved");
    let mut draws = format!("draw,initial_fuel,{}\n", columns.join(","));
    for d in 0..spec.samples {
        let vals: Vec<String> = cdf_row.values.iter().map(|v| format!("{:.6}", v[d])).collect();
        let _ = writeln!(draws, "{},{:.6},{}", d + 1, cdf_row.draws[d], vals.join(","));
    }
    let sorted: Vec<Vec<f64>> = cdf_row
        .values
        .iter()
        .map(|v| {
            let mut v = v.clone();
            v.sort_by(f64::total_cmp);
            v
        })
        .collect();
    let mut cdf = format!("probability,{}\n", columns.join(","));
    for d in 0..spec.samples {
        let vals: Vec<String> = sorted.iter().map(|v| format!("{:.6}", v[d])).collect();
        let _ = writeln!(cdf, "{:.4},{}", (d + 1) as f64 / spec.samples as f64, vals.join(","));
    }

    let files = vec![
        write(&spec.out, "table4.csv", &table)?,
        write(&spec.out, "mc_plans.csv", &plans)?,
        write(&spec.out, "mc_draws.csv", &draws)?,
        write(&spec.out, "cdf.csv", &cdf)?,
    ];
    Ok(MonteCarloReport { sofs, rows, files })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AblationRow {
    pub node: u32,
    pub probability: f64,
    pub high: bool,
    pub with_probability: f64,
    pub without_probability: f64,
}

#[derive(Debug, Clone)]
pub struct AblationReport {
    pub budget: u32,
    pub aware_plan: StationPlan,
    pub blind_plan: StationPlan,
    /// Objectives under the true probabilities.
    pub aware_objective: f64,
    pub blind_objective: f64,
    pub rows: Vec<AblationRow>,
    pub files: Vec<PathBuf>,
}

pub const ABLATION_HEADER: &str = "node,probability,group,coverage_with_probability,coverage_without_probability";

/// Solves once with the probabilities and once with every probability set
/// to 1, then compares node coverage of high (>= 0.8) and low (<= 0.2)
/// probability nodes.
pub fn cmd_prob_ablation(spec: &ExperimentSpec) -> Result<AblationReport, LabError> {
    spec.validate()?;
    let setup = Setup::load(spec)?;
    let range = spec.range_list(&[100.0])[0];
    let sof = spec.sof_list(&[1.0])[0];
    let budget = match spec.budgets[..] {
        [b] => b,
        _ => 7,
    };
    let aware_inst = setup.instance(range, sof, budget as f64)?;
    let blind_inst = aware_inst.clone().with_unit_probabilities();
    let aware = solve(&aware_inst, budget, spec)?;
    let blind = solve(&blind_inst, budget, spec)?;
    let with_p = evaluate_plan(&aware_inst, aware.plan())?;
    let without_p = evaluate_plan(&aware_inst, blind.plan())?;
    let net = &setup.network;

    let mut rows = Vec::new();
    for high in [true, false] {
        let mut group: Vec<usize> = (0..net.node_count())
            .filter(|&ix| {
                let p = setup.probabilities[ix];
                if high {
                    p >= 0.8
                } else {
                    p <= 0.2
                }
            })
            .collect();
        group.sort_by(|&a, &b| setup.probabilities[a].total_cmp(&setup.probabilities[b]).then(a.cmp(&b)));
        rows.extend(group.into_iter().map(|ix| AblationRow {
            node: net.id(ix),
            probability: setup.probabilities[ix],
            high,
            with_probability: with_p.node_coverage[ix],
            without_probability: without_p.node_coverage[ix],
        }));
    }
    let mut csv = format!("{ABLATION_HEADER}\n");
    for r in &rows {
        let _ = writeln!(
            csv,
            "{},{:.4},{},{:.6},{:.6}",
            r.node,
            r.probability,
            if r.high { "high" } else { "low" },
            r.with_probability,
            r.without_probability
        );
    }
    let mut summary = String::from("plan_kind,plan,objective_with_probability,objective_unit_probability\n");
    for (kind, plan) in [("with_probability", aware.plan()), ("without_probability", blind.plan())] {
        let _ = writeln!(
            summary,
            "{kind},{},{:.6},{:.6}",
            plan_ids(net, plan),
            aware_inst.objective(plan),
            blind_inst.objective(plan)
        );
    }
    let files = vec![
        write(&spec.out, "table5.csv", &csv)?,
        write(&spec.out, "ablation_summary.csv", &summary)?,
    ];
    Ok(AblationReport {
        budget,
        aware_objective: with_p.objective,
        blind_objective: without_p.objective,
        aware_plan: aware.plan().clone(),
        blind_plan: blind.plan().clone(),
        rows,
        files,
    })
}

#[derive(Debug, Clone)]
pub struct PathsReport {
    pub entries: usize,
    pub paths: usize,
    pub seconds: f64,
    pub file: PathBuf,
}

/// Builds the deviation-path catalog and writes it as JSON.
pub fn cmd_paths(spec: &ExperimentSpec) -> Result<PathsReport, LabError> {
    spec.validate()?;
    let network = match &spec.network {
        Some(path) => Network::parse(&read(path)?)?,
        None => sioux_falls_network(),
    };
    let start = Instant::now();
    let catalog = build_catalog(&network, spec.k, None)?;
    let seconds = start.elapsed().as_secs_f64();
    let file = write(&spec.out, "catalog.json", &catalog.to_json())?;
    Ok(PathsReport {
        entries: catalog.entries().len(),
        paths: catalog.path_count(),
        seconds,
        file,
    })
}

/// Writes the full model for the first budget, range and fuel fraction.
pub fn cmd_export(spec: &ExperimentSpec) -> Result<(MilpSize, PathBuf), LabError> {
    spec.validate()?;
    let setup = Setup::load(spec)?;
    let inst = setup.instance(spec.range_list(&[100.0])[0], spec.sof_list(&[1.0])[0], spec.budgets[0] as f64)?;
    fs::create_dir_all(&spec.out)?;
    let path = spec.out.join("model.lp");
    let size = export_milp(&inst, fs::File::create(&path)?)?;
    Ok((size, path))
}
