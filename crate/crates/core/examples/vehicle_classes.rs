//! Interchangeable vehicles: the class model against the plain model over
//! the expanded fleet, then recovery of concrete vehicles.
//!
//! `cargo run --example vehicle_classes -- 100`

use moap::gen::rw::{generate_rw, RwParams};
use moap::prelude::*;

pub fn run_example(employees: usize) -> Solution {
    let inst = generate_rw(&RwParams::new(employees, 0.1, 2));
    let cfg = BranchAndBoundConfig::default().with_lp().with_time_limit(30.0);
    for class in inst.classes() {
        println!("class {} with {} vehicles", class.id, class.vehicles.len());
    }

    let graph = OfferConflictGraph::build(&inst);
    let model = build_model(&inst, &graph, Formulation::Clique, true).unwrap();
    let classed = solve_bnb(&inst, &model, &cfg);
    println!("class model: {:?} after {} nodes", classed.solution.as_ref().map(|s| s.objective), classed.nodes);

    let plain = inst.expand_classes().unwrap();
    let pg = OfferConflictGraph::build(&plain);
    let pm = build_model(&plain, &pg, Formulation::Clique, false).unwrap();
    let r = solve_bnb(&plain, &pm, &cfg);
    println!("plain model: {:?} after {} nodes ({:?})", r.solution.map(|s| s.objective), r.nodes, r.status);

    let sol = assign_vehicles(&inst, &classed.solution.unwrap()).expect("class capacities hold");
    for (&offer, &vehicle) in sol.vehicle_assignment.iter().flatten() {
        let o = &inst.offers()[offer];
        println!("  {} {} -> {}", o.id, o.interval, inst.vehicles()[vehicle].id);
    }
    assert!(evaluate_solution(&inst, &sol).feasible);
    sol
}

fn main() {
    let n = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(100);
    run_example(n);
}
