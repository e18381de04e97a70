//! Integer models over offer variables and their exact solution.
//!
//! Every offer gets a binary variable. Each demand contributes an assignment
//! row (exactly one offer) and each vehicle clique a capacity row (at most one
//! selected offer, or at most the class size for a class clique). The edge
//! formulation instead has one `x_a + x_b <= 1` row per vehicle edge and is
//! kept for comparison.

mod bnb;
mod classes;
mod export;
mod lp;

pub use bnb::{solve_bnb, BnbResult, BnbStatus, BoundRule, BranchAndBoundConfig, Branching};
pub use classes::{assign_vehicles, AssignError};
pub use export::{export_model, ExportFormat};
pub use lp::lp_relaxation_bound;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::conflict::{OfferConflictGraph, SelectionState};
use crate::model::{Instance, Resource, Solution};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Formulation {
    #[default]
    Clique,
    Edge,
}

impl fmt::Display for Formulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Formulation::Clique => "clique",
            Formulation::Edge => "edge",
        })
    }
}

impl FromStr for Formulation {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "clique" => Ok(Formulation::Clique),
            "edge" => Ok(Formulation::Edge),
            _ => Err(format!("unknown formulation '{s}'")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssignmentRow {
    pub demand: usize,
    pub vars: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CapacityRow {
    pub vars: Vec<usize>,
    pub rhs: usize,
}

/// A binary program `min c·x` s.t. assignment rows `= 1` and capacity rows
/// `<= rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct IlpModel {
    pub formulation: Formulation,
    pub classes: bool,
    /// Instance offer behind each variable.
    pub var_offer: Vec<usize>,
    pub var_name: Vec<String>,
    pub cost: Vec<f64>,
    pub assignment_rows: Vec<AssignmentRow>,
    pub capacity_rows: Vec<CapacityRow>,
    /// Offers selected outside the model (fixed to one), with their cost.
    pub fixed: Vec<usize>,
    pub fixed_cost: f64,
    pub row_names: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("class model requested but the instance has no vehicle classes")]
    ClassesAbsent,
    #[error("offer '{0}' references a vehicle class; use the class model")]
    ClassOfferInPlainModel(String),
    #[error("the edge formulation is only defined for the plain model")]
    EdgeWithClasses,
}

impl IlpModel {
    pub fn num_vars(&self) -> usize {
        self.var_offer.len()
    }

    /// Capacity rows of each variable.
    pub(crate) fn var_rows(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_vars()];
        for (r, row) in self.capacity_rows.iter().enumerate() {
            for &v in &row.vars {
                out[v].push(r);
            }
        }
        out
    }

    /// Variable index of `offer`, if present.
    pub fn var_of_offer(&self, offer: usize) -> Option<usize> {
        self.var_offer.iter().position(|&o| o == offer)
    }

    /// Lifts a per-row offer choice to a full-instance solution. Requires the
    /// model (plus fixed offers) to cover every demand.
    pub fn to_solution(&self, instance: &Instance, row_offers: &[usize]) -> Option<Solution> {
        let mut sel = vec![usize::MAX; instance.num_demands()];
        for &o in &self.fixed {
            sel[instance.offers()[o].demand] = o;
        }
        for (row, &o) in self.assignment_rows.iter().zip(row_offers) {
            sel[row.demand] = o;
        }
        if sel.contains(&usize::MAX) {
            return None;
        }
        Some(Solution::new(instance, sel))
    }
}

/// Builds the model for `instance`.
///
/// `classes` selects the class model, whose clique rows have the class size
/// as right-hand side. Rows that can never bind (no more members than the
/// right-hand side, e.g. singleton cliques) are dropped.
pub fn build_model(
    instance: &Instance,
    graph: &OfferConflictGraph,
    formulation: Formulation,
    classes: bool,
) -> Result<IlpModel, ModelError> {
    if classes && !instance.has_classes() {
        return Err(ModelError::ClassesAbsent);
    }
    if classes && formulation == Formulation::Edge {
        return Err(ModelError::EdgeWithClasses);
    }
    if !classes {
        if let Some(o) = instance
            .offers()
            .iter()
            .find(|o| matches!(o.resource, Resource::Class(_)))
        {
            return Err(ModelError::ClassOfferInPlainModel(o.id.clone()));
        }
    }
    let n = instance.num_offers();
    let mut capacity_rows = Vec::new();
    match formulation {
        Formulation::Clique => {
            for c in graph.cliques() {
                let rhs = graph.groups()[c.group].capacity;
                if c.members.len() > rhs {
                    capacity_rows.push(CapacityRow {
                        vars: c.members.clone(),
                        rhs,
                    });
                }
            }
        }
        Formulation::Edge => {
            for (a, b) in graph.vehicle_edges() {
                capacity_rows.push(CapacityRow {
                    vars: vec![a, b],
                    rhs: 1,
                });
            }
        }
    }
    let assignment_rows = instance
        .demands()
        .iter()
        .enumerate()
        .map(|(d, dem)| AssignmentRow {
            demand: d,
            vars: dem.offers.clone().collect(),
        })
        .collect();
    let mut model = IlpModel {
        formulation,
        classes,
        var_offer: (0..n).collect(),
        var_name: Vec::new(),
        cost: instance.offers().iter().map(|o| o.cost).collect(),
        assignment_rows,
        capacity_rows,
        fixed: Vec::new(),
        fixed_cost: 0.0,
        row_names: Vec::new(),
    };
    name_model(instance, &mut model);
    Ok(model)
}

/// Model over the demands that `state` leaves unassigned, with every current
/// selection fixed. Variables whose offers are already blocked are left out
/// and capacity right-hand sides are reduced by the fixed load.
pub fn build_completion_model(instance: &Instance, state: &SelectionState<'_>) -> IlpModel {
    let graph = state.graph();
    let fixed: Vec<usize> = state.selected().iter().flatten().copied().collect();
    let fixed_cost = fixed.iter().map(|&o| instance.offers()[o].cost).sum();
    let mut var_offer = Vec::new();
    let mut var_of = std::collections::HashMap::new();
    let mut assignment_rows = Vec::new();
    for (d, sel) in state.selected().iter().enumerate() {
        if sel.is_some() {
            continue;
        }
        let mut vars = Vec::new();
        for o in instance.demands()[d].offers.clone() {
            if state.is_selectable(o) {
                var_of.insert(o, var_offer.len());
                vars.push(var_offer.len());
                var_offer.push(o);
            }
        }
        assignment_rows.push(AssignmentRow { demand: d, vars });
    }
    let fixed_set: HashSet<usize> = fixed.iter().copied().collect();
    let mut seen_rows = HashSet::new();
    let mut capacity_rows = Vec::new();
    for &o in &var_offer {
        for &c in graph.offer_cliques(o) {
            if !seen_rows.insert(c) {
                continue;
            }
            let clique = &graph.cliques()[c];
            let load = clique.members.iter().filter(|m| fixed_set.contains(m)).count();
            let rhs = graph.groups()[clique.group].capacity - load;
            let vars: Vec<usize> = clique
                .members
                .iter()
                .filter_map(|m| var_of.get(m).copied())
                .collect();
            if vars.len() > rhs {
                capacity_rows.push(CapacityRow { vars, rhs });
            }
        }
    }
    let mut model = IlpModel {
        formulation: Formulation::Clique,
        classes: instance.has_classes(),
        cost: var_offer.iter().map(|&o| instance.offers()[o].cost).collect(),
        var_offer,
        var_name: Vec::new(),
        assignment_rows,
        capacity_rows,
        fixed,
        fixed_cost,
        row_names: Vec::new(),
    };
    name_model(instance, &mut model);
    model
}

fn sanitize(id: &str) -> String {
    id.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' })
        .collect()
}

/// Assigns `x_<offer id>` variable names and `d_<demand id>` / `k_<n>` row
/// names, disambiguating collisions created by sanitizing.
fn name_model(instance: &Instance, model: &mut IlpModel) {
    let mut used = HashSet::new();
    let mut unique = |base: String| {
        let mut name = base.clone();
        let mut k = 1;
        while !used.insert(name.clone()) {
            name = format!("{base}_{k}");
            k += 1;
        }
        name
    };
    model.var_name = model
        .var_offer
        .iter()
        .map(|&o| unique(format!("x_{}", sanitize(&instance.offers()[o].id))))
        .collect();
    let mut rows: Vec<String> = model
        .assignment_rows
        .iter()
        .map(|r| unique(format!("d_{}", sanitize(&instance.demands()[r.demand].id))))
        .collect();
    rows.extend((0..model.capacity_rows.len()).map(|i| unique(format!("k_{i}"))));
    model.row_names = rows;
}
