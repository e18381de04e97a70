//! Adaptive large neighborhood search.
//!
//! Every iteration picks a destroy and a repair operator by roulette over
//! their weights, rebuilds part of the current selection and decides by
//! simulated annealing whether the candidate becomes current. Weights follow
//! `rho = lambda * rho + (1 - lambda) * sigma'`, where the reward sigma
//! depends on the outcome and is divided by the repair time.

pub mod destroy;
pub mod repair;

use std::collections::hash_map::DefaultHasher;
use std::collections::HashSet;
use std::hash::{Hash, Hasher};
use std::time::Instant;

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::conflict::{DemandConflictGraph, OfferConflictGraph, SelectionState};
use crate::greedy::{order_demands, greedy_select, SortCriterion};
use crate::model::{objectives_match, Instance, Solution};
use crate::rng::{stream, streams};

pub use destroy::{
    conflict_bfs_from, destroy_conflict_bfs, destroy_count, destroy_in_window, destroy_random,
    destroy_time_interval, time_window,
};
pub use repair::{repair_exact, repair_greedy_rcl, RepairWork};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DestroyOp {
    Random,
    TimeInterval,
    DemandConflict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RepairOp {
    Greedy,
    Exact,
}

/// How repair durations are obtained for reward scaling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TimingMode {
    /// Measured wall-clock time.
    #[default]
    WallClock,
    /// Work counted in scanned offers and search nodes, converted to seconds
    /// at fixed rates. The time limit and the trace use this clock too, so
    /// runs become reproducible bit for bit.
    Counted,
}

/// When the search stops; the first limit reached wins.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct StopCriterion {
    /// Wall-clock seconds.
    pub time_limit: Option<f64>,
    pub max_iterations: Option<u64>,
    /// Stop as soon as the best objective is at most this value.
    pub target_objective: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AlnsConfig {
    pub sigma1: f64,
    pub sigma2: f64,
    pub sigma3: f64,
    pub lambda: f64,
    /// Relative worsening accepted with probability `p_w` at the start.
    pub w: f64,
    pub p_w: f64,
    pub cooling: f64,
    pub destroy_ops: Vec<DestroyOp>,
    pub repair_ops: Vec<RepairOp>,
    pub r_des: f64,
    pub r_rep: f64,
    pub repair_criterion: SortCriterion,
    pub initial_criterion: SortCriterion,
    pub exact_node_cap: u64,
    /// Accept only strictly improving candidates (plain LNS).
    pub only_improving: bool,
    pub seed: u64,
    pub stop: StopCriterion,
    pub timing: TimingMode,
    /// Seconds between convergence trace samples.
    pub trace_interval: f64,
    pub record_history: bool,
}

impl Default for AlnsConfig {
    fn default() -> Self {
        Self {
            sigma1: 23.0,
            sigma2: 40.0,
            sigma3: 50.0,
            lambda: 0.2377,
            w: 0.0373,
            p_w: 0.656,
            cooling: 0.2267,
            destroy_ops: vec![DestroyOp::Random, DestroyOp::TimeInterval, DestroyOp::DemandConflict],
            repair_ops: vec![RepairOp::Greedy, RepairOp::Exact],
            r_des: 0.15,
            r_rep: 0.1,
            repair_criterion: SortCriterion::MaxMinCost,
            initial_criterion: SortCriterion::MaxMinCost,
            exact_node_cap: 50_000,
            only_improving: false,
            seed: 0,
            stop: StopCriterion {
                time_limit: Some(300.0),
                ..Default::default()
            },
            timing: TimingMode::WallClock,
            trace_interval: 10.0,
            record_history: false,
        }
    }
}

impl AlnsConfig {
    /// LNS with random destroy and greedy repair.
    pub fn lns_random() -> Self {
        Self {
            destroy_ops: vec![DestroyOp::Random],
            repair_ops: vec![RepairOp::Greedy],
            r_des: 0.1580,
            r_rep: 0.1308,
            only_improving: true,
            ..Self::default()
        }
    }

    /// LNS with time interval destroy and greedy repair.
    pub fn lns_time_interval() -> Self {
        Self {
            destroy_ops: vec![DestroyOp::TimeInterval],
            repair_ops: vec![RepairOp::Greedy],
            r_des: 0.1053,
            r_rep: 0.1063,
            only_improving: true,
            ..Self::default()
        }
    }

    /// LNS with demand conflict graph destroy and exact repair.
    pub fn lns_demand_conflict() -> Self {
        Self {
            destroy_ops: vec![DestroyOp::DemandConflict],
            repair_ops: vec![RepairOp::Exact],
            r_des: 0.1836,
            only_improving: true,
            ..Self::default()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_iterations(mut self, n: u64) -> Self {
        self.stop = StopCriterion {
            max_iterations: Some(n),
            ..Default::default()
        };
        self.timing = TimingMode::Counted;
        self
    }

    pub fn with_time_limit(mut self, secs: f64) -> Self {
        self.stop.time_limit = Some(secs);
        self
    }

    pub fn validate(&self) -> Result<(), AlnsError> {
        let bad = |m: &str| Err(AlnsError::InvalidConfig(m.to_string()));
        let open01 = |x: f64| x > 0.0 && x < 1.0;
        if [self.sigma1, self.sigma2, self.sigma3].iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
            return bad("rewards must be finite and non-negative");
        }
        if !open01(self.lambda) {
            return bad("lambda must lie in (0, 1)");
        }
        if !(self.w > 0.0 && self.w.is_finite()) {
            return bad("w must be positive");
        }
        if !open01(self.p_w) {
            return bad("p_w must lie in (0, 1)");
        }
        if !open01(self.cooling) {
            return bad("cooling rate must lie in (0, 1)");
        }
        if !(self.r_des > 0.0 && self.r_des <= 1.0) || !(self.r_rep > 0.0 && self.r_rep <= 1.0) {
            return bad("destroy and repair fractions must lie in (0, 1]");
        }
        if self.destroy_ops.is_empty() || self.repair_ops.is_empty() {
            return bad("at least one destroy and one repair operator are needed");
        }
        if self.trace_interval <= 0.0 {
            return bad("trace interval must be positive");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlnsError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("no feasible initial solution ({0} demands unassigned)")]
    NoInitialSolution(usize),
}

/// Outcome class of one iteration, for reward assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    NewBest,
    Improving,
    /// Accepted without improving the current solution.
    AcceptedWorse,
    Rejected,
    Duplicate,
    /// The repair left some demand unserved.
    Infeasible,
}

/// Probability of accepting a candidate that is `delta` worse at temperature `t`.
pub fn acceptance_probability(delta: f64, t: f64) -> f64 {
    if delta <= 0.0 {
        1.0
    } else if t <= 0.0 {
        0.0
    } else {
        (-delta / t).exp()
    }
}

pub fn accept<R: Rng + ?Sized>(candidate_cost: f64, current_cost: f64, t: f64, rng: &mut R) -> bool {
    let p = acceptance_probability(candidate_cost - current_cost, t);
    p >= 1.0 || rng.gen::<f64>() < p
}

/// Temperature at which a candidate `w` (relative) worse than
/// `initial_cost` is accepted with probability `p_w`, capped at
/// `1e6 * initial_cost`; 1 for a zero-cost start.
pub fn init_temperature(initial_cost: f64, w: f64, p_w: f64) -> Result<f64, AlnsError> {
    if !(w > 0.0) {
        return Err(AlnsError::InvalidConfig("w must be positive".into()));
    }
    if !(p_w > 0.0 && p_w < 1.0) {
        return Err(AlnsError::InvalidConfig("p_w must lie in (0, 1)".into()));
    }
    if initial_cost <= 0.0 {
        return Ok(1.0);
    }
    let t = -(w * initial_cost) / p_w.ln();
    Ok(t.min(1e6 * initial_cost))
}

/// Smallest repair duration used when scaling rewards.
pub const MIN_REPAIR_SECONDS: f64 = 0.001;

/// Decayed weight update with a time-scaled reward.
pub fn update_weight(rho: f64, lambda: f64, sigma: f64, repair_seconds: f64) -> f64 {
    let scaled = sigma / repair_seconds.max(MIN_REPAIR_SECONDS);
    (lambda * rho + (1.0 - lambda) * scaled).max(f64::MIN_POSITIVE)
}

/// Reward for an outcome.
pub fn reward(cfg: &AlnsConfig, outcome: Outcome) -> f64 {
    match outcome {
        Outcome::NewBest => cfg.sigma1,
        Outcome::Improving => cfg.sigma2,
        Outcome::AcceptedWorse => cfg.sigma3,
        Outcome::Rejected | Outcome::Duplicate | Outcome::Infeasible => 0.0,
    }
}

/// 64-bit hash of a (possibly partial) selection.
pub fn selection_hash(selection: &[Option<usize>]) -> u64 {
    let mut h = DefaultHasher::new();
    for (d, o) in selection.iter().enumerate() {
        if let Some(o) = o {
            (d, *o).hash(&mut h);
        }
    }
    h.finish()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub destroy: DestroyOp,
    pub repair: RepairOp,
    pub outcome: Outcome,
    pub candidate_cost: Option<f64>,
    pub current_cost: f64,
    pub best_cost: f64,
    pub temperature: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlnsOutcome {
    pub best: Solution,
    pub initial_objective: f64,
    pub iterations: u64,
    /// (elapsed seconds, best objective) samples.
    pub trace: Vec<(f64, f64)>,
    pub destroy_weights: Vec<f64>,
    pub repair_weights: Vec<f64>,
    pub start_temperature: f64,
    pub final_temperature: f64,
    pub distinct_candidates: usize,
    pub duplicates: u64,
    pub history: Vec<IterationRecord>,
}

impl AlnsOutcome {
    /// Convergence trace as `elapsed_s,best_cost` CSV.
    pub fn trace_csv(&self) -> String {
        let mut s = String::from("elapsed_s,best_cost\n");
        for (t, c) in &self.trace {
            s.push_str(&format!("{t:.3},{c}\n"));
        }
        s
    }
}

// Conversion rates for counted timing.
const SECONDS_PER_OFFER_SCAN: f64 = 1e-8;
const SECONDS_PER_NODE: f64 = 1e-5;

/// Index drawn with probability proportional to its weight.
pub fn roulette<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    if weights.len() == 1 {
        return 0;
    }
    WeightedIndex::new(weights)
        .expect("weights are positive")
        .sample(rng)
}

/// Runs the search from a greedy start.
pub fn run_alns(
    instance: &Instance,
    graph: &OfferConflictGraph,
    demand_graph: &DemandConflictGraph,
    cfg: &AlnsConfig,
) -> Result<AlnsOutcome, AlnsError> {
    cfg.validate()?;
    let order = order_demands(instance, cfg.initial_criterion, Some(cfg.seed))
        .expect("seed supplied");
    let start = greedy_select(instance, graph, &order);
    if !start.unassigned.is_empty() {
        return Err(AlnsError::NoInitialSolution(start.unassigned.len()));
    }
    let initial = SelectionState::from_selection(graph, &start.selection);
    run_alns_from(instance, graph, demand_graph, cfg, initial)
}

/// Runs the search from a given complete selection.
pub fn run_alns_from(
    instance: &Instance,
    graph: &OfferConflictGraph,
    demand_graph: &DemandConflictGraph,
    cfg: &AlnsConfig,
    initial: SelectionState<'_>,
) -> Result<AlnsOutcome, AlnsError> {
    cfg.validate()?;
    debug_assert!(std::ptr::eq(initial.graph(), graph), "state built on another graph");
    let clock = Instant::now();
    let mut rng = stream(cfg.seed, streams::ALNS);
    let n = instance.num_demands();
    let Some(init_sel) = initial.to_total() else {
        return Err(AlnsError::NoInitialSolution(n - initial.num_assigned()));
    };
    let initial_objective = instance.objective(&init_sel);

    let mut current = initial;
    let mut current_cost = initial_objective;
    let mut best_sel = init_sel;
    let mut best_cost = initial_objective;
    let mut rho_minus = vec![1.0; cfg.destroy_ops.len()];
    let mut rho_plus = vec![1.0; cfg.repair_ops.len()];
    let start_temperature = init_temperature(initial_objective, cfg.w, cfg.p_w)?;
    let mut temperature = start_temperature;
    let mut seen: HashSet<u64> = HashSet::new();
    seen.insert(selection_hash(current.selected()));
    let mut duplicates = 0;
    let mut history = Vec::new();
    let mut trace = vec![(0.0, best_cost)];
    let mut next_sample = cfg.trace_interval;
    let rcl = destroy_count(cfg.r_rep, n).max(1);

    // Counted mode measures time in converted repair work, so the trace and
    // the time limit are reproducible too.
    let mut counted_seconds = 0.0;
    let elapsed = |counted: f64| match cfg.timing {
        TimingMode::WallClock => clock.elapsed().as_secs_f64(),
        TimingMode::Counted => counted,
    };
    let mut iterations = 0u64;
    let done = |iters: u64, best: f64, now: f64| {
        cfg.stop.max_iterations.is_some_and(|m| iters >= m)
            || cfg.stop.time_limit.is_some_and(|t| now >= t)
            || cfg
                .stop
                .target_objective
                .is_some_and(|t| best <= t || objectives_match(best, t))
    };
    while !done(iterations, best_cost, elapsed(counted_seconds)) {
        iterations += 1;
        let di = roulette(&rho_minus, &mut rng);
        let ri = roulette(&rho_plus, &mut rng);
        let selection = current.to_total().expect("current is complete");
        let removed = match cfg.destroy_ops[di] {
            DestroyOp::Random => destroy_random(n, cfg.r_des, &mut rng),
            DestroyOp::TimeInterval => destroy_time_interval(instance, &selection, cfg.r_des, &mut rng),
            DestroyOp::DemandConflict => destroy_conflict_bfs(demand_graph, cfg.r_des, &mut rng),
        };
        let mut candidate = current.clone();
        for &d in &removed {
            candidate.deselect(d);
        }
        let mut work = RepairWork::default();
        let repair_clock = Instant::now();
        let complete = match cfg.repair_ops[ri] {
            RepairOp::Greedy => {
                repair_greedy_rcl(instance, &mut candidate, cfg.repair_criterion, rcl, &mut rng, &mut work)
                    .is_empty()
            }
            RepairOp::Exact => {
                match repair_exact(instance, &candidate, cfg.repair_criterion, cfg.exact_node_cap, &mut work) {
                    Some(sol) => {
                        for &d in &removed {
                            candidate.select(sol.selection[d]);
                        }
                        true
                    }
                    None => false,
                }
            }
        };
        let repair_seconds = match cfg.timing {
            TimingMode::WallClock => repair_clock.elapsed().as_secs_f64(),
            TimingMode::Counted => {
                work.offers_scanned as f64 * SECONDS_PER_OFFER_SCAN + work.nodes as f64 * SECONDS_PER_NODE
            }
        };
        counted_seconds += repair_seconds;

        let mut candidate_cost = None;
        let outcome = if !complete {
            Outcome::Infeasible
        } else {
            let sel = candidate.to_total().expect("complete candidate");
            let cost = instance.objective(&sel);
            candidate_cost = Some(cost);
            let fresh = seen.insert(selection_hash(candidate.selected()));
            if !fresh {
                duplicates += 1;
            }
            let accepted = if cfg.only_improving {
                cost < current_cost && !objectives_match(cost, current_cost)
            } else {
                accept(cost, current_cost, temperature, &mut rng)
            };
            let class = if cost < best_cost && !objectives_match(cost, best_cost) {
                Outcome::NewBest
            } else if cost < current_cost && !objectives_match(cost, current_cost) {
                Outcome::Improving
            } else if accepted {
                Outcome::AcceptedWorse
            } else {
                Outcome::Rejected
            };
            if class == Outcome::NewBest {
                best_cost = cost;
                best_sel = sel;
            }
            if accepted || class == Outcome::NewBest {
                current = candidate;
                current_cost = cost;
            }
            if fresh {
                class
            } else {
                Outcome::Duplicate
            }
        };
        let sigma = reward(cfg, outcome);
        rho_minus[di] = update_weight(rho_minus[di], cfg.lambda, sigma, repair_seconds);
        rho_plus[ri] = update_weight(rho_plus[ri], cfg.lambda, sigma, repair_seconds);
        if cfg.record_history {
            history.push(IterationRecord {
                destroy: cfg.destroy_ops[di],
                repair: cfg.repair_ops[ri],
                outcome,
                candidate_cost,
                current_cost,
                best_cost,
                temperature,
            });
        }
        temperature *= cfg.cooling;
        let now = elapsed(counted_seconds);
        while now >= next_sample {
            trace.push((next_sample, best_cost));
            next_sample += cfg.trace_interval;
        }
    }
    trace.push((elapsed(counted_seconds), best_cost));

    Ok(AlnsOutcome {
        best: Solution::new(instance, best_sel),
        initial_objective,
        iterations,
        trace,
        destroy_weights: rho_minus,
        repair_weights: rho_plus,
        start_temperature,
        final_temperature: temperature,
        distinct_candidates: seen.len(),
        duplicates,
        history,
    })
}
