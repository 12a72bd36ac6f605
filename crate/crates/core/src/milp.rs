//! Export of the full location model as an LP-format MILP, for checking the
//! exact solver against an external solver.
//!
//! Variable names:
//! - `X_i` station at node `i` (candidates only)
//! - `P_r_s_k` round trip `k` of pair `(r, s)` is used
//! - `Y_r_s` pair `(r, s)` is covered
//! - `Z_r` coverage of origin `r`
//! - `B_r_s_k_p`, `L_r_s_k_p` fuel on arrival and fuel added at position `p`
//!   of round trip `k` (positions, not nodes, so a node visited twice on the
//!   way out and back gets two instances)
//!
//! Node ids are the network's ids; `k` and `p` count from 1 and 0.

use std::io::{self, Write};

use crate::coverage::Instance;
use crate::lp::{Bound, Constraint, LpModel, Relation, Sense, Term};

/// Variable and row counts per family of an exported model.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MilpSize {
    pub stations: usize,
    pub path_vars: usize,
    pub pair_vars: usize,
    pub coverage_vars: usize,
    pub fuel_vars: usize,
    pub refuel_vars: usize,
    pub capacity_rows: usize,
    pub conservation_upper_rows: usize,
    pub conservation_lower_rows: usize,
    pub station_rows: usize,
    pub pair_upper_rows: usize,
    pub pair_lower_rows: usize,
    pub coverage_rows: usize,
    pub budget_rows: usize,
    pub initial_fuel_rows: usize,
}

impl MilpSize {
    pub fn variables(&self) -> usize {
        self.stations + self.path_vars + self.pair_vars + self.coverage_vars + self.fuel_vars + self.refuel_vars
    }

    pub fn constraints(&self) -> usize {
        self.capacity_rows
            + self.conservation_upper_rows
            + self.conservation_lower_rows
            + self.station_rows
            + self.pair_upper_rows
            + self.pair_lower_rows
            + self.coverage_rows
            + self.budget_rows
            + self.initial_fuel_rows
    }
}

/// The big-M used by the capacity and conservation rows: range plus the
/// longest round trip in the catalog.
pub fn big_m(inst: &Instance) -> f64 {
    let longest = inst
        .catalog()
        .entries()
        .iter()
        .flat_map(|e| e.paths.iter())
        .map(|p| p.length())
        .fold(0.0, f64::max);
    inst.vehicle().range() + longest
}

pub fn build_milp(inst: &Instance) -> (LpModel, MilpSize) {
    let net = inst.network();
    let cat = inst.catalog();
    let beta = inst.vehicle().range();
    let beta0 = inst.vehicle().initial_fuel();
    let m = big_m(inst);
    let n = net.node_count();
    let id = |ix: usize| net.id(ix);

    let mut model = LpModel::new(Sense::Maximize);
    model.name = Some("afs".into());
    let mut size = MilpSize::default();

    model.objective = (0..n)
        .map(|r| Term::new(inst.probabilities()[r], format!("Z_{}", id(r))))
        .collect();
    size.coverage_vars = n;

    let mut capacity = Vec::new();
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    let mut pair_upper = Vec::new();
    let mut pair_lower = Vec::new();
    let mut initial = Vec::new();
    let mut station_terms: Vec<Vec<Term>> = vec![Vec::new(); n];
    let mut occurrences = vec![0usize; n];
    let mut fixed_zero = Vec::new();
    let mut path_vars = Vec::new();
    let mut pair_vars = Vec::new();

    for entry in cat.entries() {
        let (r, s) = (id(entry.origin), id(entry.destination));
        let pair = format!("Y_{r}_{s}");
        let mut uses = Vec::new();
        for (k0, path) in entry.paths.iter().enumerate() {
            let k = k0 + 1;
            let used = format!("P_{r}_{s}_{k}");
            let fuel = |p: usize| format!("B_{r}_{s}_{k}_{p}");
            let added = |p: usize| format!("L_{r}_{s}_{k}_{p}");
            for (p, &node) in path.nodes().iter().enumerate() {
                size.fuel_vars += 1;
                size.refuel_vars += 1;
                capacity.push(Constraint {
                    name: format!("cap_{r}_{s}_{k}_{p}"),
                    terms: vec![Term::new(1.0, fuel(p)), Term::new(1.0, added(p)), Term::new(m, used.clone())],
                    relation: Relation::Le,
                    rhs: beta + m,
                });
                if inst.is_candidate(node) {
                    station_terms[node].push(Term::new(1.0, added(p)));
                    occurrences[node] += 1;
                } else {
                    fixed_zero.push(added(p));
                }
                if p + 1 < path.nodes().len() {
                    let d = path.leg(p);
                    upper.push(Constraint {
                        name: format!("consup_{r}_{s}_{k}_{p}"),
                        terms: vec![
                            Term::new(1.0, fuel(p)),
                            Term::new(1.0, added(p)),
                            Term::new(-1.0, fuel(p + 1)),
                            Term::new(m, used.clone()),
                        ],
                        relation: Relation::Le,
                        rhs: m + d,
                    });
                    lower.push(Constraint {
                        name: format!("conslo_{r}_{s}_{k}_{p}"),
                        terms: vec![
                            Term::new(-1.0, fuel(p)),
                            Term::new(-1.0, added(p)),
                            Term::new(1.0, fuel(p + 1)),
                            Term::new(m, used.clone()),
                        ],
                        relation: Relation::Le,
                        rhs: m - d,
                    });
                }
            }
            initial.push(Constraint {
                name: format!("init_{r}_{s}_{k}"),
                terms: vec![Term::new(1.0, fuel(0))],
                relation: Relation::Eq,
                rhs: beta0,
            });
            uses.push(used.clone());
            path_vars.push(used);
        }
        let kcount = entry.paths.len() as f64;
        let mut up: Vec<Term> = uses.iter().map(|u| Term::new(1.0, u.clone())).collect();
        up.push(Term::new(-kcount, pair.clone()));
        pair_upper.push(Constraint {
            name: format!("pairup_{r}_{s}"),
            terms: up,
            relation: Relation::Le,
            rhs: 0.0,
        });
        let mut lo = vec![Term::new(1.0, pair.clone())];
        lo.extend(uses.iter().map(|u| Term::new(-1.0, u.clone())));
        pair_lower.push(Constraint {
            name: format!("pairlo_{r}_{s}"),
            terms: lo,
            relation: Relation::Le,
            rhs: 0.0,
        });
        pair_vars.push(pair);
    }

    let candidates = inst.candidates();
    let stations: Vec<(usize, Constraint)> = candidates
        .iter()
        .map(|&i| {
            let mut terms = std::mem::take(&mut station_terms[i]);
            terms.push(Term::new(-(beta * occurrences[i] as f64), format!("X_{}", id(i))));
            (
                i,
                Constraint {
                    name: format!("station_{}", id(i)),
                    terms,
                    relation: Relation::Le,
                    rhs: 0.0,
                },
            )
        })
        .collect();

    let coverage: Vec<Constraint> = (0..n)
        .map(|r| {
            let rid = id(r);
            let mut terms = vec![Term::new(inst.denominators()[r], format!("Z_{rid}"))];
            terms.extend((0..n).filter(|&s| s != r).map(|s| Term::new(-1.0, format!("Y_{rid}_{}", id(s)))));
            Constraint {
                name: format!("cover_{rid}"),
                terms,
                relation: Relation::Eq,
                rhs: 0.0,
            }
        })
        .collect();

    let budget = Constraint {
        name: "budget".into(),
        terms: candidates
            .iter()
            .map(|&i| Term::new(inst.costs()[i], format!("X_{}", id(i))))
            .collect(),
        relation: Relation::Le,
        rhs: inst.budget(),
    };

    size.stations = candidates.len();
    size.path_vars = path_vars.len();
    size.pair_vars = pair_vars.len();
    size.capacity_rows = capacity.len();
    size.conservation_upper_rows = upper.len();
    size.conservation_lower_rows = lower.len();
    size.station_rows = stations.len();
    size.pair_upper_rows = pair_upper.len();
    size.pair_lower_rows = pair_lower.len();
    size.coverage_rows = coverage.len();
    size.budget_rows = 1;
    size.initial_fuel_rows = initial.len();

    model.constraints.extend(capacity);
    model.constraints.extend(upper);
    model.constraints.extend(lower);
    model.constraints.extend(stations.into_iter().map(|(_, c)| c));
    model.constraints.extend(pair_upper);
    model.constraints.extend(pair_lower);
    model.constraints.extend(coverage);
    model.constraints.push(budget);
    model.constraints.extend(initial);

    model.bounds = (0..n)
        .map(|r| Bound::Range {
            var: format!("Z_{}", id(r)),
            lower: 0.0,
            upper: 1.0,
        })
        .chain(fixed_zero.into_iter().map(|var| Bound::Fixed { var, value: 0.0 }))
        .collect();

    model.binaries = candidates
        .iter()
        .map(|&i| format!("X_{}", id(i)))
        .chain(path_vars)
        .chain(pair_vars)
        .collect();

    (model, size)
}

/// Writes the model in LP format and returns its size.
pub fn export_milp(inst: &Instance, mut sink: impl Write) -> io::Result<MilpSize> {
    let (model, size) = build_milp(inst);
    sink.write_all(model.to_lp_string().as_bytes())?;
    Ok(size)
}
