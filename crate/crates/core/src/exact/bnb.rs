//! Depth-first branch-and-bound for [`IlpModel`]s.
//!
//! Each node first propagates: a capacity row that is full forbids its other
//! variables, a demand with one allowed offer takes it, and a demand with none
//! closes the node. The default bound sums the cheapest allowed offer of
//! every open demand. The LP rule additionally solves the linear relaxation,
//! kept warm across fixes, and uses integral relaxations as incumbents.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::lp::LpRelaxation;
use super::IlpModel;
use crate::model::{Instance, Solution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundRule {
    /// Sum over open demands of the cheapest allowed offer.
    #[default]
    CheapestOffer,
    /// The stronger of the above and the linear relaxation.
    LpRelaxation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Branching {
    /// Demand with the largest gap between its two cheapest allowed offers;
    /// select its cheapest offer, then forbid it.
    #[default]
    MaxRegret,
    /// Variable whose relaxation value is closest to one half (LP rule only;
    /// falls back to `MaxRegret` otherwise).
    MostFractional,
}

#[derive(Debug, Clone, Default)]
pub struct BranchAndBoundConfig {
    pub time_limit: Option<Duration>,
    pub node_limit: Option<u64>,
    /// Warm start; ignored if it is not feasible for the model.
    pub incumbent: Option<Solution>,
    pub branching: Branching,
    pub bound: BoundRule,
}

impl BranchAndBoundConfig {
    pub fn with_time_limit(mut self, secs: f64) -> Self {
        self.time_limit = Some(Duration::from_secs_f64(secs));
        self
    }

    pub fn with_node_limit(mut self, nodes: u64) -> Self {
        self.node_limit = Some(nodes);
        self
    }

    pub fn with_lp(mut self) -> Self {
        self.bound = BoundRule::LpRelaxation;
        self.branching = Branching::MostFractional;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BnbStatus {
    Optimal,
    Infeasible,
    /// A time or node limit stopped the search.
    Limit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BnbResult {
    pub solution: Option<Solution>,
    pub status: BnbStatus,
    /// Lower bound on the optimum (infinite if proven infeasible).
    pub bound: f64,
    /// Bound at the root node after propagation.
    pub root_bound: f64,
    pub nodes: u64,
    pub optimal: bool,
}

impl BnbResult {
    /// Relative gap between the incumbent and the bound.
    pub fn gap(&self) -> Option<f64> {
        let obj = self.solution.as_ref()?.objective;
        Some(if obj.abs() < 1e-12 { 0.0 } else { ((obj - self.bound) / obj.abs()).max(0.0) })
    }
}

#[derive(Clone, Copy)]
enum Op {
    Select(usize),
    Forbid(usize),
}

struct Search<'a> {
    model: &'a IlpModel,
    var_rows: Vec<Vec<usize>>,
    var_assign: Vec<usize>,
    chosen: Vec<Option<usize>>,
    cost: f64,
    forbid: Vec<u32>,
    load: Vec<usize>,
    trail: Vec<Op>,
    best: Option<(f64, Vec<usize>)>,
    nodes: u64,
    started: Instant,
    time_limit: Option<Duration>,
    node_limit: Option<u64>,
    aborted: bool,
    abort_bound: f64,
    open: Vec<f64>,
    root_bound: Option<f64>,
    lp: Option<LpRelaxation>,
    branching: Branching,
}

struct NodeInfo {
    bound: f64,
    /// Branching row and its cheapest allowed variable.
    row: usize,
    var: usize,
}

fn tol(x: f64) -> f64 {
    1e-9 * x.abs().max(1.0)
}

impl<'a> Search<'a> {
    fn allowed(&self, v: usize) -> bool {
        self.forbid[v] == 0 && self.chosen[self.var_assign[v]].is_none()
    }

    fn select(&mut self, v: usize) {
        let row = self.var_assign[v];
        self.chosen[row] = Some(v);
        self.cost += self.model.cost[v];
        for &r in &self.var_rows[v] {
            self.load[r] += 1;
            if self.load[r] == self.model.capacity_rows[r].rhs {
                for &u in &self.model.capacity_rows[r].vars {
                    self.forbid[u] += 1;
                }
            }
        }
        self.trail.push(Op::Select(v));
        if let Some(lp) = &mut self.lp {
            lp.fix(self.model, v, 1.0);
        }
    }

    fn forbid_var(&mut self, v: usize) {
        self.forbid[v] += 1;
        self.trail.push(Op::Forbid(v));
        if let Some(lp) = &mut self.lp {
            lp.fix(self.model, v, 0.0);
        }
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().expect("trail entry") {
                Op::Select(v) => {
                    if let Some(lp) = &mut self.lp {
                        lp.unfix_last(self.model, v);
                    }
                    for &r in &self.var_rows[v] {
                        if self.load[r] == self.model.capacity_rows[r].rhs {
                            for &u in &self.model.capacity_rows[r].vars {
                                self.forbid[u] -= 1;
                            }
                        }
                        self.load[r] -= 1;
                    }
                    self.cost -= self.model.cost[v];
                    self.chosen[self.var_assign[v]] = None;
                }
                Op::Forbid(v) => {
                    if let Some(lp) = &mut self.lp {
                        lp.unfix_last(self.model, v);
                    }
                    self.forbid[v] -= 1;
                }
            }
        }
    }

    /// Propagates to a fixpoint. `None` if some open demand has no allowed
    /// offer; `Some(None)` if every demand is served.
    fn propagate(&mut self) -> Option<Option<NodeInfo>> {
        loop {
            let mut forced = Vec::new();
            let mut bound = self.cost;
            let mut branch: Option<(f64, usize, usize)> = None;
            for (ri, row) in self.model.assignment_rows.iter().enumerate() {
                if self.chosen[ri].is_some() {
                    continue;
                }
                let (mut first, mut second) = (f64::INFINITY, f64::INFINITY);
                let mut first_var = usize::MAX;
                let mut count = 0;
                for &v in &row.vars {
                    if self.forbid[v] != 0 {
                        continue;
                    }
                    count += 1;
                    let c = self.model.cost[v];
                    if c < first {
                        second = first;
                        first = c;
                        first_var = v;
                    } else if c < second {
                        second = c;
                    }
                }
                match count {
                    0 => return None,
                    1 => forced.push(first_var),
                    _ => {
                        bound += first;
                        let regret = second - first;
                        if branch.map_or(true, |(r, _, _)| regret > r) {
                            branch = Some((regret, ri, first_var));
                        }
                    }
                }
            }
            if forced.is_empty() {
                return Some(branch.map(|(_, row, var)| NodeInfo { bound, row, var }));
            }
            for v in forced {
                if !self.allowed(v) {
                    // An earlier forced pick filled a shared row.
                    return None;
                }
                self.select(v);
            }
        }
    }

    fn limit_hit(&mut self) -> bool {
        if let Some(n) = self.node_limit {
            if self.nodes >= n {
                return true;
            }
        }
        if let Some(t) = self.time_limit {
            if self.nodes % 64 == 0 && self.started.elapsed() >= t {
                return true;
            }
        }
        false
    }

    fn incumbent_value(&self) -> f64 {
        self.best.as_ref().map_or(f64::INFINITY, |b| b.0)
    }

    fn record_incumbent(&mut self) {
        if self.cost < self.incumbent_value() - tol(self.cost) {
            let vars = self.chosen.iter().map(|c| c.expect("complete")).collect();
            self.best = Some((self.cost, vars));
        }
    }

    /// Tries to take an integral relaxation as a complete selection.
    fn try_lp_integral(&mut self) -> bool {
        let Some(lp) = &self.lp else { return false };
        let mut picks = Vec::new();
        for (ri, row) in self.model.assignment_rows.iter().enumerate() {
            if self.chosen[ri].is_some() {
                continue;
            }
            if lp.slack(ri) > 1e-6 {
                return false;
            }
            let mut pick = None;
            for &v in &row.vars {
                let x = lp.value(v);
                if x > 1e-6 && x < 1.0 - 1e-6 {
                    return false;
                }
                if x >= 1.0 - 1e-6 {
                    pick = Some(v);
                }
            }
            match pick {
                Some(v) => picks.push(v),
                None => return false,
            }
        }
        let mark = self.trail.len();
        // Selecting through the normal path re-checks every row.
        let lp = self.lp.take();
        let ok = picks.iter().all(|&v| {
            let ok = self.allowed(v);
            if ok {
                self.select(v);
            }
            ok
        });
        if ok {
            self.record_incumbent();
        }
        self.undo_to(mark);
        self.lp = lp;
        ok
    }

    fn most_fractional(&self) -> Option<usize> {
        let lp = self.lp.as_ref()?;
        let mut best: Option<(f64, usize)> = None;
        for (ri, row) in self.model.assignment_rows.iter().enumerate() {
            if self.chosen[ri].is_some() {
                continue;
            }
            for &v in &row.vars {
                if self.forbid[v] != 0 {
                    continue;
                }
                let x = lp.value(v);
                let frac = x.min(1.0 - x);
                if frac > 1e-6 && best.map_or(true, |(f, _)| frac > f + 1e-12) {
                    best = Some((frac, v));
                }
            }
        }
        best.map(|(_, v)| v)
    }

    fn dfs(&mut self, parent_bound: f64) {
        if self.limit_hit() {
            self.aborted = true;
            let open = self.open.iter().copied().fold(parent_bound, f64::min);
            self.abort_bound = open;
            return;
        }
        self.nodes += 1;
        let mark = self.trail.len();
        let info = match self.propagate() {
            None => {
                self.root_bound.get_or_insert(f64::INFINITY);
                self.undo_to(mark);
                return;
            }
            Some(None) => {
                self.root_bound.get_or_insert(self.cost);
                self.record_incumbent();
                self.undo_to(mark);
                return;
            }
            Some(Some(info)) => info,
        };
        let mut bound = info.bound;
        if let Some(lp) = &self.lp {
            if let Some(v) = lp.objective() {
                bound = bound.max(v - 1e-7 * v.abs().max(1.0));
            }
        }
        bound = bound.max(parent_bound);
        self.root_bound.get_or_insert(bound);
        if bound >= self.incumbent_value() - tol(bound) {
            self.undo_to(mark);
            return;
        }
        if self.lp.is_some() && self.try_lp_integral() {
            self.undo_to(mark);
            return;
        }
        let var = match self.branching {
            Branching::MostFractional => self.most_fractional().unwrap_or(info.var),
            Branching::MaxRegret => info.var,
        };
        debug_assert!(self.allowed(var) || self.var_assign[var] == info.row);

        let child = self.trail.len();
        self.open.push(bound);
        self.select(var);
        self.dfs(bound);
        self.undo_to(child);
        self.open.pop();
        if self.aborted {
            // The right branch is still open.
            self.abort_bound = self.abort_bound.min(bound);
            self.undo_to(mark);
            return;
        }
        if bound < self.incumbent_value() - tol(bound) {
            self.forbid_var(var);
            self.dfs(bound);
        }
        self.undo_to(mark);
    }
}

/// Solves `model` exactly, subject to the limits in `cfg`.
///
/// The returned solution covers the whole instance (fixed offers of a
/// completion model included). The search order is a pure function of the
/// model and configuration, so results are deterministic under node limits.
pub fn solve_bnb(instance: &Instance, model: &IlpModel, cfg: &BranchAndBoundConfig) -> BnbResult {
    let started = Instant::now();
    let n = model.num_vars();
    let mut var_assign = vec![usize::MAX; n];
    for (ri, row) in model.assignment_rows.iter().enumerate() {
        for &v in &row.vars {
            var_assign[v] = ri;
        }
    }
    let lp = (cfg.bound == BoundRule::LpRelaxation).then(|| LpRelaxation::new(model));
    let mut search = Search {
        model,
        var_rows: model.var_rows(),
        var_assign,
        chosen: vec![None; model.assignment_rows.len()],
        cost: 0.0,
        forbid: vec![0; n],
        load: vec![0; model.capacity_rows.len()],
        trail: Vec::new(),
        best: None,
        nodes: 0,
        started,
        time_limit: cfg.time_limit,
        node_limit: cfg.node_limit,
        aborted: false,
        abort_bound: f64::INFINITY,
        open: Vec::new(),
        root_bound: None,
        lp,
        branching: cfg.branching,
    };
    if let Some(inc) = &cfg.incumbent {
        search.best = incumbent_vars(model, inc);
    }
    std::thread::scope(|s| {
        std::thread::Builder::new()
            .stack_size(512 << 20)
            .spawn_scoped(s, || search.dfs(f64::NEG_INFINITY))
            .expect("spawn search thread")
            .join()
            .expect("search thread panicked");
    });

    let best_value = search.incumbent_value();
    let solution = search.best.as_ref().and_then(|(_, vars)| {
        let offers: Vec<usize> = vars.iter().map(|&v| model.var_offer[v]).collect();
        model.to_solution(instance, &offers)
    });
    let (status, bound) = if search.aborted {
        (BnbStatus::Limit, search.abort_bound.min(best_value))
    } else if solution.is_some() {
        (BnbStatus::Optimal, best_value)
    } else {
        (BnbStatus::Infeasible, f64::INFINITY)
    };
    BnbResult {
        solution,
        status,
        bound: bound + model.fixed_cost,
        root_bound: search.root_bound.unwrap_or(f64::NEG_INFINITY) + model.fixed_cost,
        nodes: search.nodes,
        optimal: status == BnbStatus::Optimal,
    }
}

/// Maps a full-instance solution onto model variables, if it is feasible
/// for the model.
fn incumbent_vars(model: &IlpModel, sol: &Solution) -> Option<(f64, Vec<usize>)> {
    let mut vars = Vec::with_capacity(model.assignment_rows.len());
    for row in &model.assignment_rows {
        let offer = *sol.selection.get(row.demand)?;
        let v = *row.vars.iter().find(|&&v| model.var_offer[v] == offer)?;
        vars.push(v);
    }
    let mut picked = vec![false; model.num_vars()];
    for &v in &vars {
        picked[v] = true;
    }
    for row in &model.capacity_rows {
        if row.vars.iter().filter(|&&v| picked[v]).count() > row.rhs {
            return None;
        }
    }
    let cost = vars.iter().map(|&v| model.cost[v]).sum();
    Some((cost, vars))
}
