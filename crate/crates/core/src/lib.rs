//! Mobility offer allocation.
//!
//! Each mobility demand must be served by exactly one of its offers. An offer
//! has a cost, a half-open absence interval and optionally a fleet vehicle (or
//! a class of interchangeable vehicles) that it blocks for that interval. The
//! goal is a cheapest selection in which no vehicle is used twice at once.
//!
//! The crate provides:
//!
//! - [`model`]: instances, solutions, JSON formats and evaluation
//! - [`conflict`]: offer/demand conflict graphs and interval clique sweeps
//! - [`exact`]: clique-based integer models, LP/MPS export, branch-and-bound
//!   and vehicle recovery for class models
//! - [`greedy`]: demand-ordering construction heuristics
//! - [`alns`]: adaptive large neighborhood search
//! - [`gen`]: seeded instance generators and the interval-scheduling reduction
//! - [`bench`]: experiment runner and result aggregation
//!
//! ```
//! use moap::prelude::*;
//!
//! let inst = gen::ag::generate_ag(&gen::ag::AgParams::new(40, 0.4, 0.6, 0.02, 1));
//! let graph = OfferConflictGraph::build(&inst);
//! let order = greedy::order_demands(&inst, SortCriterion::MaxMinCost, None).unwrap();
//! let out = greedy::greedy_select(&inst, &graph, &order);
//! assert!(out.unassigned.is_empty());
//! ```

pub mod alns;
pub mod bench;
pub mod conflict;
pub mod exact;
pub mod gen;
pub mod greedy;
pub mod model;
pub(crate) mod rng;

pub mod prelude {
    pub use crate::alns::{run_alns, AlnsConfig, AlnsOutcome, StopCriterion};
    pub use crate::conflict::{DemandConflictGraph, OfferConflictGraph};
    pub use crate::exact::{
        assign_vehicles, build_model, solve_bnb, BoundRule, BranchAndBoundConfig, Formulation,
        IlpModel,
    };
    pub use crate::gen;
    pub use crate::greedy::{self, SortCriterion};
    pub use crate::model::{
        evaluate, evaluate_solution, read_instance, write_instance, Instance, Offer, Resource,
        Solution, TimeInterval,
    };
}
