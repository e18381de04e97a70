//! Linear relaxation of an [`IlpModel`], kept warm across branching fixes.
//!
//! Assignment rows get a penalised slack (`sum x + s = 1`) so that every fix
//! the search makes leaves the relaxation feasible. Integer solutions have
//! `s = 0`, so the relaxation value stays a valid lower bound.

use microlp::{ComparisonOp, OptimizationDirection, Problem, SolveOutcome, Variable};

use super::IlpModel;

pub(crate) struct LpRelaxation {
    vars: Vec<Variable>,
    slacks: Vec<Variable>,
    state: Option<microlp::Solution>,
    fixes: Vec<(usize, f64)>,
    penalty: f64,
}

fn build(model: &IlpModel, penalty: f64, fixes: &[(usize, f64)]) -> (Problem, Vec<Variable>, Vec<Variable>) {
    let mut bounds = vec![(0.0, 1.0); model.num_vars()];
    for &(v, val) in fixes {
        bounds[v] = (val, val);
    }
    let mut p = Problem::new(OptimizationDirection::Minimize);
    let vars: Vec<Variable> = model
        .cost
        .iter()
        .zip(bounds)
        .map(|(&c, b)| p.add_var(c, b))
        .collect();
    let slacks: Vec<Variable> = model
        .assignment_rows
        .iter()
        .map(|_| p.add_var(penalty, (0.0, 1.0)))
        .collect();
    for (row, &s) in model.assignment_rows.iter().zip(&slacks) {
        let mut terms: Vec<(Variable, f64)> = row.vars.iter().map(|&v| (vars[v], 1.0)).collect();
        terms.push((s, 1.0));
        p.add_constraint(terms, ComparisonOp::Eq, 1.0);
    }
    for row in &model.capacity_rows {
        let terms: Vec<(Variable, f64)> = row.vars.iter().map(|&v| (vars[v], 1.0)).collect();
        p.add_constraint(terms, ComparisonOp::Le, row.rhs as f64);
    }
    (p, vars, slacks)
}

fn solved(outcome: Result<SolveOutcome, microlp::Error>) -> Option<microlp::Solution> {
    match outcome {
        Ok(SolveOutcome::Solution(s)) => Some(s),
        _ => None,
    }
}

impl LpRelaxation {
    pub(crate) fn new(model: &IlpModel) -> Self {
        let max_cost = model.cost.iter().copied().fold(0.0, f64::max);
        let penalty = 2.0 * max_cost + 1.0;
        let (p, vars, slacks) = build(model, penalty, &[]);
        Self {
            vars,
            slacks,
            state: solved(p.solve()),
            fixes: Vec::new(),
            penalty,
        }
    }

    /// Relaxation value, or `None` if the solver failed.
    pub(crate) fn objective(&self) -> Option<f64> {
        self.state.as_ref().map(|s| s.objective())
    }

    pub(crate) fn value(&self, var: usize) -> f64 {
        self.state.as_ref().map_or(0.0, |s| s.var_value_raw(self.vars[var]))
    }

    pub(crate) fn slack(&self, row: usize) -> f64 {
        self.state.as_ref().map_or(1.0, |s| s.var_value_raw(self.slacks[row]))
    }

    pub(crate) fn fix(&mut self, model: &IlpModel, var: usize, val: f64) {
        self.fixes.push((var, val));
        let next = self.state.take().map(|s| s.fix_var(self.vars[var], val));
        self.state = next.and_then(solved);
        if self.state.is_none() {
            self.rebuild(model);
        }
    }

    /// Releases the most recent fix, which must be on `var`.
    pub(crate) fn unfix_last(&mut self, model: &IlpModel, var: usize) {
        let last = self.fixes.pop();
        debug_assert_eq!(last.map(|f| f.0), Some(var));
        let next = self
            .state
            .take()
            .map(|s| s.unfix_var(self.vars[var]).map(|(o, _)| o));
        self.state = next.and_then(solved);
        if self.state.is_none() {
            self.rebuild(model);
        }
    }

    fn rebuild(&mut self, model: &IlpModel) {
        let (p, vars, slacks) = build(model, self.penalty, &self.fixes);
        self.vars = vars;
        self.slacks = slacks;
        self.state = solved(p.solve());
    }
}

/// Value of the linear relaxation of `model`, including fixed offer cost.
pub fn lp_relaxation_bound(model: &IlpModel) -> f64 {
    let lp = LpRelaxation::new(model);
    lp.objective().map_or(f64::NEG_INFINITY, |v| v + model.fixed_cost)
}
