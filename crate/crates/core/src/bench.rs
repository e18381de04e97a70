//! Experiment harness: runs solver configurations over instance sets, writes
//! a versioned CSV of results and aggregates it into summary tables.
//!
//! An experiment is described by a JSON file:
//!
//! ```json
//! {
//!   "instances": [{"glob": "data/*.json"}, {"ag": {"num_demands": 200, "pu": 0.2, "pa": 0.6, "pl": 0.02, "seed": 1}}],
//!   "methods": ["greedy-maxmincost", "g1mw", "bnb", {"name": "alns-short", "method": "alns", "config": {"r_des": 0.2}}],
//!   "time_limit": 60,
//!   "seeds": [1, 2],
//!   "output_dir": "out"
//! }
//! ```
//!
//! Every (instance, method, seed, repetition) is one run and one result row.
//! Runs execute on a worker pool; rows are sorted canonically afterwards, so
//! the output does not depend on scheduling.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::alns::{run_alns, AlnsConfig};
use crate::conflict::{DemandConflictGraph, OfferConflictGraph};
use crate::exact::{assign_vehicles, build_model, solve_bnb, BoundRule, BranchAndBoundConfig, Formulation};
use crate::gen::{generate_ag, generate_rw, AgParams, RwParams};
use crate::greedy::{greedy_g1mw, solve_greedy, SortCriterion};
use crate::model::{read_instance, Instance, Solution};

pub const RESULTS_HEADER: &str = "# moap-results v1";

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid experiment: {0}")]
    Invalid(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Method {
    Greedy(SortCriterion),
    G1mw,
    Bnb {
        formulation: Formulation,
        classes: bool,
        bound: BoundRule,
    },
    Alns(Box<AlnsConfig>),
}

impl Method {
    /// Resolves a method tag such as `greedy-maxmincost`, `bnb-edge` or
    /// `lns-random`.
    pub fn from_tag(tag: &str) -> Result<Method, BenchError> {
        let lp = BoundRule::LpRelaxation;
        let bnb = |formulation, classes, bound| Method::Bnb { formulation, classes, bound };
        Ok(match tag {
            "greedy" => Method::Greedy(SortCriterion::MaxMinCost),
            "g1mw" | "g1-mw" => Method::G1mw,
            "bnb" => bnb(Formulation::Clique, false, lp),
            "bnb-edge" => bnb(Formulation::Edge, false, lp),
            "bnb-classes" => bnb(Formulation::Clique, true, lp),
            "bnb-cheapest" => bnb(Formulation::Clique, false, BoundRule::CheapestOffer),
            "bnb-classes-cheapest" => bnb(Formulation::Clique, true, BoundRule::CheapestOffer),
            "alns" => Method::Alns(Box::default()),
            "lns-random" => Method::Alns(Box::new(AlnsConfig::lns_random())),
            "lns-time-interval" => Method::Alns(Box::new(AlnsConfig::lns_time_interval())),
            "lns-demand-conflict" => Method::Alns(Box::new(AlnsConfig::lns_demand_conflict())),
            _ => match tag.strip_prefix("greedy-") {
                Some(c) => Method::Greedy(
                    SortCriterion::from_str(c).map_err(|e| BenchError::Invalid(e.to_string()))?,
                ),
                None => return Err(BenchError::Invalid(format!("unknown method '{tag}'"))),
            },
        })
    }
}

/// A named method, as listed in an experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodSpec {
    pub name: String,
    pub method: Method,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum MethodEntry {
    Tag(String),
    Full {
        name: String,
        method: String,
        #[serde(default)]
        config: Option<Value>,
    },
}

impl MethodEntry {
    fn resolve(&self) -> Result<MethodSpec, BenchError> {
        match self {
            MethodEntry::Tag(tag) => Ok(MethodSpec { name: tag.clone(), method: Method::from_tag(tag)? }),
            MethodEntry::Full { name, method, config } => {
                let mut m = Method::from_tag(method)?;
                if let Some(cfg) = config {
                    let Method::Alns(base) = &m else {
                        return Err(BenchError::Invalid(format!("method '{name}': only ALNS methods take a config")));
                    };
                    m = Method::Alns(Box::new(merge_alns_config(base, cfg)?));
                }
                Ok(MethodSpec { name: name.clone(), method: m })
            }
        }
    }
}

/// Overrides fields of `base` with those present in `overrides`.
pub fn merge_alns_config(base: &AlnsConfig, overrides: &Value) -> Result<AlnsConfig, BenchError> {
    let mut v = serde_json::to_value(base).expect("config serializes");
    let (Value::Object(dst), Value::Object(src)) = (&mut v, overrides) else {
        return Err(BenchError::Invalid("ALNS config must be a JSON object".into()));
    };
    for (k, val) in src {
        if !dst.contains_key(k) {
            return Err(BenchError::Invalid(format!("unknown ALNS config key '{k}'")));
        }
        dst.insert(k.clone(), val.clone());
    }
    let cfg: AlnsConfig = serde_json::from_value(v).map_err(|e| BenchError::Invalid(e.to_string()))?;
    cfg.validate().map_err(|e| BenchError::Invalid(e.to_string()))?;
    Ok(cfg)
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum InstanceSource {
    /// Instance files matching a glob pattern, relative to the experiment file.
    Glob(String),
    Ag(AgParams),
    /// The full AG parameter grid, restricted to the given demand counts.
    AgGrid { demands: Vec<usize>, seed: u64 },
    Rw(RwParams),
}

fn default_time_limit() -> f64 {
    300.0
}

fn default_repetitions() -> u32 {
    1
}

fn default_seeds() -> Vec<u64> {
    vec![0]
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub instances: Vec<InstanceSource>,
    methods: Vec<MethodEntry>,
    /// Per-run limit in seconds for branch-and-bound and ALNS.
    #[serde(default = "default_time_limit")]
    pub time_limit: f64,
    /// Run ALNS for this many iterations with counted timing instead of the
    /// wall-clock limit, which makes its results reproducible.
    #[serde(default)]
    pub iterations: Option<u64>,
    #[serde(default = "default_repetitions")]
    pub repetitions: u32,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub threads: Option<usize>,
    #[serde(skip)]
    base_dir: PathBuf,
}

impl ExperimentSpec {
    pub fn from_json(text: &str, base_dir: impl Into<PathBuf>) -> Result<Self, BenchError> {
        let mut spec: ExperimentSpec =
            serde_json::from_str(text).map_err(|e| BenchError::Invalid(e.to_string()))?;
        spec.base_dir = base_dir.into();
        if let Some(out) = &spec.output_dir {
            if out.is_relative() {
                spec.output_dir = Some(spec.base_dir.join(out));
            }
        }
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, BenchError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::from_json(&text, base)
    }

    pub fn methods(&self) -> Result<Vec<MethodSpec>, BenchError> {
        self.methods.iter().map(MethodEntry::resolve).collect()
    }

    fn validate(&self) -> Result<(), BenchError> {
        let fail = |m: &str| Err(BenchError::Invalid(m.to_string()));
        if self.repetitions < 1 {
            return fail("repetitions must be at least 1");
        }
        if !(self.time_limit > 0.0) {
            return fail("time_limit must be positive");
        }
        if self.seeds.is_empty() {
            return fail("at least one seed is required");
        }
        if self.methods.is_empty() {
            return fail("at least one method is required");
        }
        let methods = self.methods()?;
        let names: BTreeSet<&str> = methods.iter().map(|m| m.name.as_str()).collect();
        if names.len() != methods.len() {
            return fail("method names must be unique");
        }
        Ok(())
    }

    /// Loads or generates every instance, keyed by name.
    pub fn instances(&self) -> Result<Vec<(String, Instance)>, BenchError> {
        let mut out = Vec::new();
        for src in &self.instances {
            match src {
                InstanceSource::Glob(pattern) => {
                    let full = self.base_dir.join(pattern);
                    let paths = glob::glob(&full.to_string_lossy())
                        .map_err(|e| BenchError::Invalid(format!("bad glob '{pattern}': {e}")))?;
                    let mut found = false;
                    for p in paths {
                        let p = p.map_err(|e| BenchError::Invalid(e.to_string()))?;
                        let inst = read_instance(&p)
                            .map_err(|e| BenchError::Invalid(format!("{}: {e}", p.display())))?;
                        let name = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                        out.push((name, inst));
                        found = true;
                    }
                    if !found {
                        return Err(BenchError::Invalid(format!("no instance matches '{pattern}'")));
                    }
                }
                InstanceSource::Ag(p) => out.push(named(generate_ag(p))),
                InstanceSource::AgGrid { demands, seed } => {
                    for p in AgParams::grid(*seed).into_iter().filter(|p| demands.contains(&p.num_demands)) {
                        out.push(named(generate_ag(&p)));
                    }
                }
                InstanceSource::Rw(p) => out.push(named(generate_rw(p))),
            }
        }
        let names: BTreeSet<&str> = out.iter().map(|(n, _)| n.as_str()).collect();
        if names.len() != out.len() {
            return Err(BenchError::Invalid("instance names must be unique".into()));
        }
        Ok(out)
    }
}

fn named(inst: Instance) -> (String, Instance) {
    (inst.name().unwrap_or("instance").to_string(), inst)
}

/// Outcome of one solver run.
#[derive(Debug, Clone, Default)]
pub struct RunOutput {
    pub solution: Option<Solution>,
    pub optimal: bool,
    pub bound: Option<f64>,
    /// Convergence trace CSV (ALNS only).
    pub trace: Option<String>,
    pub nodes: Option<u64>,
    pub error: Option<String>,
}

/// Limits for [`run_method`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunLimits {
    pub time_limit: f64,
    pub iterations: Option<u64>,
}

/// Runs one method on one instance.
pub fn run_method(instance: &Instance, method: &Method, seed: u64, limits: RunLimits) -> RunOutput {
    let graph = OfferConflictGraph::build(instance);
    match method {
        Method::Greedy(crit) => match solve_greedy(instance, &graph, *crit, Some(seed)) {
            Ok(out) => greedy_output(instance, out),
            Err(e) => RunOutput { error: Some(e.to_string()), ..Default::default() },
        },
        Method::G1mw => greedy_output(instance, greedy_g1mw(instance, &graph)),
        Method::Bnb { formulation, classes, bound } => {
            run_bnb(instance, &graph, *formulation, *classes, *bound, limits.time_limit)
        }
        Method::Alns(base) => {
            let mut cfg = (**base).clone().with_seed(seed);
            cfg = match limits.iterations {
                Some(n) => cfg.with_iterations(n),
                None => cfg.with_time_limit(limits.time_limit),
            };
            let dg = DemandConflictGraph::build(&graph);
            match run_alns(instance, &graph, &dg, &cfg) {
                Ok(out) => RunOutput {
                    trace: Some(out.trace_csv()),
                    solution: Some(out.best),
                    ..Default::default()
                },
                Err(e) => RunOutput { error: Some(e.to_string()), ..Default::default() },
            }
        }
    }
}

fn greedy_output(instance: &Instance, out: crate::greedy::GreedyOutcome) -> RunOutput {
    let unassigned = out.unassigned.len();
    match out.into_solution(instance) {
        Some(s) => RunOutput { solution: Some(s), ..Default::default() },
        None => RunOutput {
            error: Some(format!("{unassigned} demands left unassigned")),
            ..Default::default()
        },
    }
}

fn run_bnb(
    instance: &Instance,
    graph: &OfferConflictGraph,
    formulation: Formulation,
    classes: bool,
    bound: BoundRule,
    time_limit: f64,
) -> RunOutput {
    let fail = |e: String| RunOutput { error: Some(e), ..Default::default() };
    let mut cfg = BranchAndBoundConfig::default().with_time_limit(time_limit);
    if bound == BoundRule::LpRelaxation {
        cfg = cfg.with_lp();
    }
    if !classes && instance.has_class_offers() {
        // Solve the plain model over the expanded fleet and map back.
        let plain = match instance.expand_classes() {
            Ok(p) => p,
            Err(e) => return fail(e.to_string()),
        };
        let pg = OfferConflictGraph::build(&plain);
        let mut out = run_bnb(&plain, &pg, formulation, false, bound, time_limit);
        out.solution = out.solution.map(|s| collapse_expanded(instance, &plain, &s));
        return out;
    }
    let model = match build_model(instance, graph, formulation, classes) {
        Ok(m) => m,
        Err(e) => return fail(e.to_string()),
    };
    cfg.incumbent = solve_greedy(instance, graph, SortCriterion::MaxMinCost, None)
        .ok()
        .and_then(|g| g.into_solution(instance));
    let res = solve_bnb(instance, &model, &cfg);
    let mut solution = res.solution;
    if classes {
        if let Some(s) = &solution {
            match assign_vehicles(instance, s) {
                Ok(s) => solution = Some(s),
                Err(e) => return fail(e.to_string()),
            }
        }
    }
    RunOutput {
        solution,
        optimal: res.optimal,
        bound: res.bound.is_finite().then_some(res.bound),
        nodes: Some(res.nodes),
        trace: None,
        error: None,
    }
}

/// Maps a solution of `expanded` (see [`Instance::expand_classes`]) back to
/// `instance`, keeping the vehicle of each class offer.
pub fn collapse_expanded(instance: &Instance, expanded: &Instance, solution: &Solution) -> Solution {
    let mut selection = Vec::with_capacity(solution.selection.len());
    let mut assignment = BTreeMap::new();
    for (d, &o) in solution.selection.iter().enumerate() {
        let offer = &expanded.offers()[o];
        let base = offer.id.split('@').next().unwrap_or(&offer.id);
        let orig = instance.offer_index(d, base).expect("expanded offer has an origin");
        if let crate::model::Resource::Vehicle(v) = offer.resource {
            if offer.id.contains('@') {
                let vid = &expanded.vehicles()[v].id;
                assignment.insert(orig, instance.vehicle_index(vid).expect("same fleet"));
            }
        }
        selection.push(orig);
    }
    let mut s = Solution::new(instance, selection);
    if !assignment.is_empty() {
        s.vehicle_assignment = Some(assignment);
    }
    s
}

/// One row of the results table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub instance: String,
    pub method: String,
    pub seed: u64,
    pub rep: u32,
    pub objective: Option<f64>,
    pub feasible: bool,
    pub optimal: bool,
    pub runtime_ms: u64,
    pub bound: Option<f64>,
    pub gap: Option<f64>,
    pub rel_diff: Option<f64>,
    pub error: String,
    /// Scalar instance metadata (generator parameters), used for grouping.
    pub params: BTreeMap<String, String>,
}

const FIXED_COLUMNS: [&str; 12] = [
    "instance", "method", "seed", "rep", "objective", "feasible", "optimal", "runtime_ms", "bound", "gap",
    "rel_diff", "error",
];

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub rows: Vec<ResultRow>,
    /// Number of runs that produced no feasible solution.
    pub failures: usize,
}

fn scalar_meta(instance: &Instance) -> BTreeMap<String, String> {
    instance
        .meta()
        .iter()
        .filter_map(|(k, v)| {
            let s = match v {
                Value::Number(n) => n.to_string(),
                Value::String(s) => s.clone(),
                Value::Bool(b) => b.to_string(),
                _ => return None,
            };
            (!FIXED_COLUMNS.contains(&k.as_str())).then(|| (k.clone(), s))
        })
        .collect()
}

/// Relative difference to `best`; zero when both are zero.
pub fn relative_difference(objective: f64, best: f64) -> f64 {
    if best.abs() < 1e-12 {
        if objective.abs() < 1e-12 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        ((objective - best) / best.abs()).max(0.0)
    }
}

/// Fills `rel_diff` from the best feasible objective per instance.
pub fn fill_relative_differences(rows: &mut [ResultRow]) {
    let mut best: BTreeMap<String, f64> = BTreeMap::new();
    for r in rows.iter().filter(|r| r.feasible) {
        if let Some(o) = r.objective {
            let e = best.entry(r.instance.clone()).or_insert(o);
            *e = e.min(o);
        }
    }
    for r in rows.iter_mut() {
        r.rel_diff = match (r.feasible, r.objective, best.get(&r.instance)) {
            (true, Some(o), Some(&b)) => Some(relative_difference(o, b)),
            _ => None,
        };
    }
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentReport, BenchError> {
    let methods = spec.methods()?;
    let instances = spec.instances()?;
    let mut jobs = Vec::new();
    for i in 0..instances.len() {
        for m in 0..methods.len() {
            for &seed in &spec.seeds {
                for rep in 0..spec.repetitions {
                    jobs.push((i, m, seed, rep));
                }
            }
        }
    }
    let limits = RunLimits { time_limit: spec.time_limit, iterations: spec.iterations };
    let run = |&(i, m, seed, rep): &(usize, usize, u64, u32)| {
        let (name, inst) = &instances[i];
        let method = &methods[m];
        let clock = Instant::now();
        let out = catch_unwind(AssertUnwindSafe(|| run_method(inst, &method.method, seed, limits)))
            .unwrap_or_else(|p| RunOutput {
                error: Some(panic_message(p.as_ref())),
                ..Default::default()
            });
        let runtime_ms = clock.elapsed().as_millis() as u64;
        let eval = out.solution.as_ref().map(|s| crate::model::evaluate_solution(inst, s));
        let feasible = eval.as_ref().is_some_and(|e| e.feasible);
        let objective = out.solution.as_ref().map(|s| s.objective);
        let gap = match (objective, out.bound) {
            (Some(o), Some(b)) => Some(if o.abs() < 1e-12 { 0.0 } else { ((o - b) / o.abs()).max(0.0) }),
            _ => None,
        };
        let error = match (&out.error, feasible, &eval) {
            (Some(e), _, _) => e.clone(),
            (None, false, Some(_)) => "infeasible solution".to_string(),
            (None, false, None) => "no solution".to_string(),
            _ => String::new(),
        };
        let row = ResultRow {
            instance: name.clone(),
            method: method.name.clone(),
            seed,
            rep,
            objective,
            feasible,
            optimal: out.optimal,
            runtime_ms,
            bound: out.bound,
            gap,
            rel_diff: None,
            error,
            params: scalar_meta(inst),
        };
        (row, out.trace)
    };
    let results: Vec<(ResultRow, Option<String>)> = match spec.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| BenchError::Invalid(e.to_string()))?
            .install(|| jobs.par_iter().map(run).collect()),
        None => jobs.par_iter().map(run).collect(),
    };
    let (mut rows, traces): (Vec<_>, Vec<_>) = results.into_iter().unzip();
    fill_relative_differences(&mut rows);
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by(|&a, &b| {
        let (x, y) = (&rows[a], &rows[b]);
        (&x.instance, &x.method, x.seed, x.rep).cmp(&(&y.instance, &y.method, y.seed, y.rep))
    });
    let rows: Vec<ResultRow> = order.iter().map(|&i| rows[i].clone()).collect();
    let failures = rows.iter().filter(|r| !r.feasible).count();

    if let Some(dir) = &spec.output_dir {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("results.csv"), results_csv(&rows)?)?;
        let trace_dir = dir.join("traces");
        for (pos, &i) in order.iter().enumerate() {
            if let Some(t) = &traces[i] {
                std::fs::create_dir_all(&trace_dir)?;
                let r = &rows[pos];
                let file = format!("{}__{}__s{}_r{}.csv", sanitize(&r.instance), sanitize(&r.method), r.seed, r.rep);
                std::fs::write(trace_dir.join(file), t)?;
            }
        }
    }
    Ok(ExperimentReport { rows, failures })
}

fn sanitize(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' || c == '.' { c } else { '_' })
        .collect()
}

fn panic_message(p: &(dyn std::any::Any + Send)) -> String {
    let msg = p
        .downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| p.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "unknown".into());
    format!("solver panicked: {msg}")
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// Serializes rows with the versioned header comment. Metadata keys become
/// extra columns after the fixed ones.
pub fn results_csv(rows: &[ResultRow]) -> Result<String, BenchError> {
    let keys: BTreeSet<&String> = rows.iter().flat_map(|r| r.params.keys()).collect();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<&str> = FIXED_COLUMNS.to_vec();
    header.extend(keys.iter().map(|k| k.as_str()));
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![
            r.instance.clone(),
            r.method.clone(),
            r.seed.to_string(),
            r.rep.to_string(),
            opt(r.objective),
            r.feasible.to_string(),
            r.optimal.to_string(),
            r.runtime_ms.to_string(),
            opt(r.bound),
            opt(r.gap),
            opt(r.rel_diff),
            r.error.clone(),
        ];
        rec.extend(keys.iter().map(|k| r.params.get(*k).cloned().unwrap_or_default()));
        w.write_record(&rec)?;
    }
    let body = String::from_utf8(w.into_inner().map_err(|e| BenchError::Io(e.into_error()))?)
        .expect("csv output is utf-8");
    Ok(format!("{RESULTS_HEADER}\n{body}"))
}

fn parse_opt(s: &str) -> Result<Option<f64>, BenchError> {
    if s.is_empty() {
        return Ok(None);
    }
    s.parse().map(Some).map_err(|_| BenchError::Invalid(format!("bad number '{s}'")))
}

/// Reads a results table written by [`results_csv`].
pub fn read_results(text: &str) -> Result<Vec<ResultRow>, BenchError> {
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some(RESULTS_HEADER) {
        return Err(BenchError::Invalid(format!("missing '{RESULTS_HEADER}' header")));
    }
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header.len() < FIXED_COLUMNS.len() || header[..FIXED_COLUMNS.len()] != FIXED_COLUMNS {
        return Err(BenchError::Invalid("unexpected results columns".into()));
    }
    let bad = |what: &str, v: &str| BenchError::Invalid(format!("bad {what} '{v}'"));
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let f = |i: usize| rec.get(i).unwrap_or("");
        let params = header[FIXED_COLUMNS.len()..]
            .iter()
            .enumerate()
            .filter(|(j, _)| !f(FIXED_COLUMNS.len() + j).is_empty())
            .map(|(j, k)| (k.clone(), f(FIXED_COLUMNS.len() + j).to_string()))
            .collect();
        rows.push(ResultRow {
            instance: f(0).to_string(),
            method: f(1).to_string(),
            seed: f(2).parse().map_err(|_| bad("seed", f(2)))?,
            rep: f(3).parse().map_err(|_| bad("rep", f(3)))?,
            objective: parse_opt(f(4))?,
            feasible: f(5).parse().map_err(|_| bad("feasible", f(5)))?,
            optimal: f(6).parse().map_err(|_| bad("optimal", f(6)))?,
            runtime_ms: f(7).parse().map_err(|_| bad("runtime_ms", f(7)))?,
            bound: parse_opt(f(8))?,
            gap: parse_opt(f(9))?,
            rel_diff: parse_opt(f(10))?,
            error: f(11).to_string(),
            params,
        });
    }
    Ok(rows)
}

/// Summary of one group of rows.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupSummary {
    pub key: Vec<String>,
    /// Distinct instances.
    pub instances: usize,
    /// Runs proven optimal.
    pub solved: usize,
    pub runs: usize,
    /// Mean gap over runs reporting one.
    pub mean_gap: Option<f64>,
    pub mean_time_s: f64,
    /// Mean relative difference to the best known over feasible runs.
    pub mean_rel_diff: Option<f64>,
}

fn column(row: &ResultRow, key: &str) -> Option<String> {
    Some(match key {
        "instance" => row.instance.clone(),
        "method" => row.method.clone(),
        "seed" => row.seed.to_string(),
        "rep" => row.rep.to_string(),
        "feasible" => row.feasible.to_string(),
        "optimal" => row.optimal.to_string(),
        _ => return row.params.get(key).cloned(),
    })
}

fn mean(xs: &[f64]) -> Option<f64> {
    (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64)
}

/// Groups rows by the values of `keys`. A key must be a grouping column or
/// a metadata column present in at least one row.
pub fn aggregate(rows: &[ResultRow], keys: &[&str]) -> Result<Vec<GroupSummary>, BenchError> {
    for k in keys {
        let known = ["instance", "method", "seed", "rep", "feasible", "optimal"].contains(k)
            || rows.iter().any(|r| r.params.contains_key(*k));
        if !known {
            return Err(BenchError::Invalid(format!("unknown group key '{k}'")));
        }
    }
    let mut groups: BTreeMap<Vec<String>, Vec<&ResultRow>> = BTreeMap::new();
    for r in rows {
        let key = keys.iter().map(|k| column(r, k).unwrap_or_default()).collect();
        groups.entry(key).or_default().push(r);
    }
    Ok(groups
        .into_iter()
        .map(|(key, rs)| {
            let instances: BTreeSet<&str> = rs.iter().map(|r| r.instance.as_str()).collect();
            let gaps: Vec<f64> = rs.iter().filter_map(|r| r.gap).collect();
            let rels: Vec<f64> = rs.iter().filter_map(|r| r.rel_diff).collect();
            let times: Vec<f64> = rs.iter().map(|r| r.runtime_ms as f64 / 1000.0).collect();
            GroupSummary {
                key,
                instances: instances.len(),
                solved: rs.iter().filter(|r| r.optimal).count(),
                runs: rs.len(),
                mean_gap: mean(&gaps),
                mean_time_s: mean(&times).unwrap_or(0.0),
                mean_rel_diff: mean(&rels),
            }
        })
        .collect())
}

/// Aligned text table: group columns, #I, #S, mean gap [%], mean time [s]
/// and mean relative difference [%].
pub fn render_table(keys: &[&str], groups: &[GroupSummary]) -> String {
    let pct = |x: Option<f64>| x.map(|v| format!("{:.2}", v * 100.0)).unwrap_or_else(|| "-".into());
    let mut header: Vec<String> = keys.iter().map(|k| k.to_string()).collect();
    header.extend(["#I", "#S", "gap[%]", "t[s]", "reldiff[%]"].map(String::from));
    let mut table = vec![header];
    for g in groups {
        let mut row = g.key.clone();
        row.push(g.instances.to_string());
        row.push(g.solved.to_string());
        row.push(pct(g.mean_gap));
        row.push(format!("{:.2}", g.mean_time_s));
        row.push(pct(g.mean_rel_diff));
        table.push(row);
    }
    let widths: Vec<usize> = (0..table[0].len())
        .map(|c| table.iter().map(|r| r[c].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in &table {
        let cells: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(c, s)| if c < keys.len() { format!("{s:<w$}", w = widths[c]) } else { format!("{s:>w$}", w = widths[c]) })
            .collect();
        let _ = writeln!(out, "{}", cells.join("  ").trim_end());
    }
    out
}
