//! Compares the demand orderings of the greedy heuristic and G1-MW on a
//! generated instance.
//!
//! `cargo run --example greedy_orderings -- 1000`

use std::time::Instant;

use moap::gen::ag::{generate_ag, AgParams};
use moap::greedy::{greedy_g1mw, solve_greedy};
use moap::prelude::*;

/// Objective per heuristic, best first.
pub fn run_example(num_demands: usize) -> Vec<(String, f64)> {
    let inst = generate_ag(&AgParams::new(num_demands, 0.4, 0.6, 0.02, 1));
    let graph = OfferConflictGraph::build(&inst);
    println!("{} demands, {} offers, {} vehicles", inst.num_demands(), inst.num_offers(), inst.vehicles().len());

    let mut results = Vec::new();
    for crit in SortCriterion::ALL {
        let t = Instant::now();
        let out = solve_greedy(&inst, &graph, crit, Some(7)).unwrap();
        results.push((crit.to_string(), out.objective, t.elapsed()));
    }
    let t = Instant::now();
    let out = greedy_g1mw(&inst, &graph);
    results.push(("g1mw".to_string(), out.objective, t.elapsed()));

    results.sort_by(|a, b| a.1.total_cmp(&b.1));
    let best = results[0].1;
    for (name, obj, time) in &results {
        println!("{name:>12}  {obj:>10.2}  +{:>6.2}%  {:>8.2?}", (obj - best) / best * 100.0, time);
    }
    results.into_iter().map(|(n, o, _)| (n, o)).collect()
}

fn main() {
    let n = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(1000);
    run_example(n);
}
