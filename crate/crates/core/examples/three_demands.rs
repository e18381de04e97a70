//! The three-demand, two-vehicle example: conflict graphs, the clique model
//! and its optimum.
//!
//! `cargo run --example three_demands`

use moap::exact::{export_model, ExportFormat};
use moap::prelude::*;

const INSTANCE: &str = include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/three_demands.json"));

pub fn run_example() -> Solution {
    let inst = Instance::from_json(INSTANCE).expect("fixture is valid");
    let graph = OfferConflictGraph::build(&inst);
    let id = |o: usize| inst.offers()[o].id.as_str();

    println!("{} demands, {} offers, {} conflict edges", inst.num_demands(), inst.num_offers(), graph.num_edges());
    for (a, b) in graph.vehicle_edges() {
        println!("  vehicle conflict {} -- {}", id(a), id(b));
    }
    for (d, e) in DemandConflictGraph::build(&graph).edges() {
        println!("  demands {} and {} compete for a vehicle", inst.demands()[d].id, inst.demands()[e].id);
    }

    let model = build_model(&inst, &graph, Formulation::Clique, false).unwrap();
    print!("{}", export_model(&model, ExportFormat::Lp));

    let result = solve_bnb(&inst, &model, &BranchAndBoundConfig::default().with_lp());
    let sol = result.solution.expect("the example is feasible");
    let picked: Vec<&str> = sol.selection.iter().map(|&o| id(o)).collect();
    println!("optimum {} with {picked:?} after {} nodes", sol.objective, result.nodes);
    sol
}

fn main() {
    run_example();
}
