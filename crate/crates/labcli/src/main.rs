use std::path::PathBuf;
use std::process::ExitCode;

use afs_labcli::commands::{plan_ids, Setup};
use afs_labcli::spec::{normalize_key, parse_config, Settings};
use afs_labcli::{
    cmd_export, cmd_monte_carlo_sof, cmd_paths, cmd_prob_ablation, cmd_solve, cmd_sweep_range, cmd_sweep_sof,
    ExperimentSpec, LabError,
};
use clap::{Args, Parser, Subcommand};

/// Refueling station siting experiments.
#[derive(Parser)]
#[command(name = "afslab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand)]
enum Command {
    /// Build the deviation-path catalog and write it as JSON.
    Paths,
    /// Solve a budget sweep; writes table2.csv, table3.csv, plans.json,
    /// routes.json and a schedule CSV.
    Solve,
    /// Objective per vehicle range and budget, with critical station counts.
    SweepRange,
    /// Objective per initial fuel fraction and budget.
    SweepSof,
    /// Score fixed-fuel designs under random initial fuel.
    MonteCarloSof,
    /// Compare plans solved with and without the probabilities (uses the
    /// budget when exactly one is given, 7 otherwise).
    ProbAblation,
    /// Write the full model in LP format.
    ExportMilp,
}

#[derive(Args)]
struct Opts {
    /// Network file (`nodes=<n> links=<m> symmetric=<0|1>` header, then `i j distance` rows).
    #[arg(long, global = true)]
    network: Option<PathBuf>,
    /// `node_id,probability` CSV.
    #[arg(long, global = true)]
    probs: Option<PathBuf>,
    /// Single budget.
    #[arg(long, global = true, conflicts_with = "budgets")]
    budget: Option<String>,
    /// Budget range `a..b` or a comma list.
    #[arg(long, global = true)]
    budgets: Option<String>,
    /// Vehicle range in miles (comma list for sweeps).
    #[arg(long, global = true)]
    range: Option<String>,
    /// Initial fuel as a fraction of the range (comma list for sweeps).
    #[arg(long, global = true)]
    sof: Option<String>,
    /// Deviation paths per origin-destination pair.
    #[arg(long, global = true)]
    k: Option<String>,
    /// exact, ga or both.
    #[arg(long, global = true)]
    solver: Option<String>,
    /// Heuristic runs per instance.
    #[arg(long, global = true)]
    seeds: Option<String>,
    /// Base random seed.
    #[arg(long, global = true)]
    seed: Option<String>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<String>,
    /// Config file of `key = value` lines using the long flag names.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Random draws per budget.
    #[arg(long, global = true)]
    samples: Option<String>,
    /// Draw initial fuel per origin rather than per scenario.
    #[arg(long, global = true)]
    per_node_sof: bool,
    /// Budget of the empirical CDF.
    #[arg(long, global = true)]
    cdf_budget: Option<String>,
    /// Budget of the per-node coverage table.
    #[arg(long, global = true)]
    detail_budget: Option<String>,
    /// Budget of the routes and schedules.
    #[arg(long, global = true)]
    route_budget: Option<String>,
    /// Pair `r,s` whose schedule is written as CSV.
    #[arg(long, global = true)]
    pair: Option<String>,
    /// Set every probability to 1.
    #[arg(long, global = true)]
    unit_probs: bool,
    /// GA population size
    #[arg(long, global = true)]
    population: Option<String>,
    /// GA generations per run
    #[arg(long, global = true)]
    generations: Option<String>,
    /// GA crossover children per generation
    #[arg(long, global = true)]
    children: Option<String>,
    /// GA per-bit flip probability (default 2 / candidates)
    #[arg(long, global = true)]
    mutation_rate: Option<String>,
    /// Copy whole parents in crossover instead of mixing genes.
    #[arg(long, global = true)]
    whole_crossover: bool,
    /// Cap on branch-and-bound nodes.
    #[arg(long, global = true)]
    node_limit: Option<String>,
}

impl Opts {
    fn settings(&self) -> Settings {
        let mut out = Settings::new();
        let mut put = |k: &str, v: &Option<String>| {
            if let Some(v) = v {
                out.insert(normalize_key(k), v.clone());
            }
        };
        let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string());
        put("network", &path(&self.network));
        put("probs", &path(&self.probs));
        put("budgets", &self.budget);
        put("budgets", &self.budgets);
        put("range", &self.range);
        put("sof", &self.sof);
        put("k", &self.k);
        put("solver", &self.solver);
        put("seeds", &self.seeds);
        put("seed", &self.seed);
        put("out", &self.out);
        put("samples", &self.samples);
        put("cdf_budget", &self.cdf_budget);
        put("detail_budget", &self.detail_budget);
        put("route_budget", &self.route_budget);
        put("pair", &self.pair);
        put("population", &self.population);
        put("generations", &self.generations);
        put("children", &self.children);
        put("mutation_rate", &self.mutation_rate);
        put("node_limit", &self.node_limit);
        for (flag, key) in [
            (self.per_node_sof, "per_node_sof"),
            (self.unit_probs, "unit_probs"),
            (self.whole_crossover, "whole_crossover"),
        ] {
            if flag {
                out.insert(key.into(), "true".into());
            }
        }
        out
    }
}

fn build_spec(opts: &Opts) -> Result<ExperimentSpec, LabError> {
    let mut spec = ExperimentSpec::default();
    if let Some(path) = &opts.config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| LabError::Validation(format!("cannot read {}: {e}", path.display())))?;
        spec.apply(&parse_config(&text)?)?;
    }
    spec.apply(&opts.settings())?;
    spec.validate()?;
    Ok(spec)
}

fn run(cli: Cli) -> Result<(), LabError> {
    let spec = build_spec(&cli.opts)?;
    match cli.command {
        Command::Paths => {
            let r = cmd_paths(&spec)?;
            println!(
                "{} pairs, {} paths in {:.3} s -> {}",
                r.entries,
                r.paths,
                r.seconds,
                r.file.display()
            );
        }
        Command::Solve => {
            let r = cmd_solve(&spec)?;
            let net = Setup::load(&spec)?.network;
            for o in r.outcomes.iter().filter(|o| spec.budgets.contains(&o.budget)) {
                println!("budget {:>2}: {:.4}  [{}]", o.budget, o.objective(), plan_ids(&net, o.plan()));
            }
            print_files(&r.files);
        }
        Command::SweepRange => {
            let r = cmd_sweep_range(&spec)?;
            for c in &r.critical {
                println!(
                    "range {}: critical budget {} (objective {:.4}{})",
                    c.range,
                    c.budget,
                    c.max_objective,
                    if c.at_ceiling { ", full coverage" } else { "" }
                );
            }
            print_files(&r.files);
        }
        Command::SweepSof => print_files(&cmd_sweep_sof(&spec)?.files),
        Command::MonteCarloSof => print_files(&cmd_monte_carlo_sof(&spec)?.files),
        Command::ProbAblation => {
            let r = cmd_prob_ablation(&spec)?;
            println!(
                "budget {}: with probabilities {:.4}, without {:.4}",
                r.budget, r.aware_objective, r.blind_objective
            );
            print_files(&r.files);
        }
        Command::ExportMilp => {
            let (size, path) = cmd_export(&spec)?;
            println!(
                "{} variables, {} constraints -> {}",
                size.variables(),
                size.constraints(),
                path.display()
            );
        }
    }
    Ok(())
}

fn print_files(files: &[PathBuf]) {
    for f in files {
        println!("wrote {}", f.display());
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
