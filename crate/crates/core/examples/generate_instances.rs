//! Generates artificial and company-style instances and writes them as JSON.
//!
//! `cargo run --example generate_instances -- out/`

use std::path::Path;

use moap::gen::ag::{generate_ag, AgParams};
use moap::gen::rw::{generate_rw, plain_offer_count, RwParams};
use moap::prelude::*;

/// Writes the instances to `dir` and returns their file names.
pub fn run_example(dir: &Path) -> Vec<String> {
    std::fs::create_dir_all(dir).unwrap();
    let mut instances = Vec::new();
    for pu in [0.2, 0.4, 0.6, 0.8] {
        instances.push(generate_ag(&AgParams::new(200, pu, 0.6, 0.02, 1)));
    }
    for nu in [0.05, 0.1] {
        instances.push(generate_rw(&RwParams::new(100, nu, 1)));
    }
    let mut names = Vec::new();
    for inst in &instances {
        let name = format!("{}.json", inst.name().unwrap_or("instance"));
        write_instance(dir.join(&name), inst).unwrap();
        println!(
            "{name}: {} demands, {} offers ({} with the fleet expanded), {} vehicles in {} classes",
            inst.num_demands(),
            inst.num_offers(),
            plain_offer_count(inst),
            inst.vehicles().len(),
            inst.classes().len(),
        );
        names.push(name);
    }
    names
}

fn main() {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "instances".into());
    run_example(Path::new(&dir));
}
