//! Interval scheduling with machine availabilities, decided by solving its
//! allocation reduction: feasible exactly when the optimum is zero.
//!
//! `cargo run --example isma_reduction`

use moap::gen::isma::{parse_isma, reduce_isma_to_moap};
use moap::prelude::*;

const CASES: [&str; 2] = [
    "M 0 10\nM 4 12\nJ 0 4\nJ 4 8\nJ 8 12\n",
    "M 0 10\nJ 0 4\nJ 3 8\n",
];

pub fn run_example() -> Vec<bool> {
    CASES
        .iter()
        .map(|text| {
            let isma = parse_isma(text).unwrap();
            let inst = reduce_isma_to_moap(&isma.machines, &isma.jobs);
            let graph = OfferConflictGraph::build(&inst);
            let model = build_model(&inst, &graph, Formulation::Clique, false).unwrap();
            let sol = solve_bnb(&inst, &model, &BranchAndBoundConfig::default()).solution.unwrap();
            let feasible = sol.objective < 1.0;
            println!(
                "{} machines, {} jobs: optimum {}, schedule {}",
                isma.machines.len(),
                isma.jobs.len(),
                sol.objective,
                if feasible { "exists" } else { "impossible" }
            );
            feasible
        })
        .collect()
}

fn main() {
    run_example();
}
