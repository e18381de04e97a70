//! Branch-and-bound on both formulations, warm-started from the greedy
//! solution.
//!
//! `cargo run --example exact_bnb -- 200`

use std::time::Instant;

use moap::exact::{lp_relaxation_bound, BnbResult};
use moap::gen::ag::{generate_ag, AgParams};
use moap::prelude::*;

pub fn run_example(num_demands: usize, time_limit: f64) -> Vec<BnbResult> {
    let inst = generate_ag(&AgParams::new(num_demands, 0.4, 0.6, 0.02, 3));
    let graph = OfferConflictGraph::build(&inst);
    let start = greedy::solve_greedy(&inst, &graph, SortCriterion::MaxMinCost, None)
        .unwrap()
        .into_solution(&inst);
    println!("greedy start: {:?}", start.as_ref().map(|s| s.objective));

    let mut results = Vec::new();
    for formulation in [Formulation::Clique, Formulation::Edge] {
        let model = build_model(&inst, &graph, formulation, false).unwrap();
        let mut cfg = BranchAndBoundConfig::default().with_lp().with_time_limit(time_limit);
        cfg.incumbent = start.clone();
        let t = Instant::now();
        let r = solve_bnb(&inst, &model, &cfg);
        println!(
            "{formulation:>6}: {} capacity rows, root LP {:.2}, objective {:?}, bound {:.2}, {} nodes, {:?} in {:.2?}",
            model.capacity_rows.len(),
            lp_relaxation_bound(&model),
            r.solution.as_ref().map(|s| s.objective),
            r.bound,
            r.nodes,
            r.status,
            t.elapsed(),
        );
        results.push(r);
    }
    results
}

fn main() {
    let n = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(200);
    run_example(n, 60.0);
}
