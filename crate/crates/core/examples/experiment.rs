//! A small experiment: several methods over generated instances at four
//! utilization levels, written to a results table and summarized.
//!
//! `cargo run --example experiment -- results/`

use std::path::Path;

use moap::bench::{aggregate, render_table, run_experiment, ExperimentSpec};

pub fn run_example(out_dir: &Path, num_demands: usize, iterations: u64) -> String {
    let instances: Vec<String> = [0.2, 0.4, 0.6, 0.8]
        .iter()
        .map(|pu| format!(r#"{{"ag": {{"num_demands": {num_demands}, "pu": {pu}, "pa": 0.6, "pl": 0.02, "seed": 1}}}}"#))
        .collect();
    let spec = format!(
        r#"{{
            "instances": [{}],
            "methods": ["greedy-maxmincost", "g1mw", "alns", "bnb"],
            "time_limit": 10,
            "iterations": {iterations},
            "seeds": [1, 2],
            "output_dir": {:?}
        }}"#,
        instances.join(", "),
        out_dir.to_str().unwrap()
    );
    let spec = ExperimentSpec::from_json(&spec, ".").unwrap();
    let report = run_experiment(&spec).unwrap();
    let keys = ["pu", "method"];
    let table = render_table(&keys, &aggregate(&report.rows, &keys).unwrap());
    print!("{table}");
    println!("{} runs, {} without a feasible solution", report.rows.len(), report.failures);
    table
}

fn main() {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "results".into());
    run_example(Path::new(&dir), 200, 1000);
}
