//! ALNS against the three single-operator LNS variants, with counted timing
//! so the output is reproducible. Prints the convergence trace of ALNS.
//!
//! `cargo run --example alns_convergence -- 1000 3000`

use moap::gen::ag::{generate_ag, AgParams};
use moap::prelude::*;

pub fn run_example(num_demands: usize, iterations: u64) -> Vec<(String, AlnsOutcome)> {
    let inst = generate_ag(&AgParams::new(num_demands, 0.4, 0.6, 0.02, 5));
    let graph = OfferConflictGraph::build(&inst);
    let dg = DemandConflictGraph::build(&graph);

    let variants = [
        ("alns", AlnsConfig::default()),
        ("lns-random", AlnsConfig::lns_random()),
        ("lns-time-interval", AlnsConfig::lns_time_interval()),
        ("lns-demand-conflict", AlnsConfig::lns_demand_conflict()),
    ];
    let mut out = Vec::new();
    for (name, cfg) in variants {
        let cfg = cfg.with_seed(1).with_iterations(iterations);
        let res = run_alns(&inst, &graph, &dg, &cfg).unwrap();
        println!(
            "{name:>20}: {:.2} -> {:.2} ({:.2}% better), weights {:.3?}",
            res.initial_objective,
            res.best.objective,
            (1.0 - res.best.objective / res.initial_objective) * 100.0,
            res.destroy_weights,
        );
        out.push((name.to_string(), res));
    }
    print!("{}", out[0].1.trace_csv());
    out
}

fn main() {
    let mut args = std::env::args().skip(1).map(|a| a.parse().ok());
    let n = args.next().flatten().unwrap_or(1000);
    let iters = args.next().flatten().unwrap_or(3000);
    run_example(n as usize, iters);
}
