use moap::gen::ag::{fleet_size, generate_ag, AgParams};
use moap::gen::isma::{isma_feasible, parse_isma, reduce_isma_to_moap, IsmaInstance};
use moap::gen::rw::{gamma, generate_rw, plain_offer_count, EventKind, RwParams, MODES};
use moap::model::{validate_instance, Resource};
use moap::prelude::*;

fn optimum(inst: &Instance) -> Option<f64> {
    let g = OfferConflictGraph::build(inst);
    let m = build_model(inst, &g, Formulation::Clique, inst.has_class_offers()).unwrap();
    solve_bnb(inst, &m, &BranchAndBoundConfig::default().with_lp()).solution.map(|s| s.objective)
}

#[test]
fn ag_is_deterministic() {
    let p = AgParams::new(200, 0.4, 0.6, 0.02, 7);
    assert_eq!(generate_ag(&p).to_json(), generate_ag(&p).to_json());
    assert_ne!(generate_ag(&p).to_json(), generate_ag(&AgParams { seed: 8, ..p }).to_json());
}

#[test]
fn ag_smallest_grid_point() {
    let inst = generate_ag(&AgParams::new(200, 0.2, 0.6, 0.02, 0));
    assert_eq!(inst.vehicles().len(), 10);
    assert_eq!(fleet_size(200, 0.2, 0.02).iter().sum::<usize>(), 10);
    let o = inst.num_offers() as f64;
    assert!((o / 1578.0 - 1.0).abs() <= 0.25, "|O| = {o}");
    assert_eq!(inst.num_demands(), 200);
}

#[test]
fn ag_every_demand_has_a_fallback() {
    for p in AgParams::grid(1).into_iter().filter(|p| p.num_demands == 200) {
        let inst = generate_ag(&p);
        for d in 0..inst.num_demands() {
            assert!(inst.demand_offers(d).iter().any(|o| o.resource == Resource::None));
        }
    }
}

#[test]
fn ag_pipeline_rules() {
    let inst = generate_ag(&AgParams::new(200, 0.4, 0.6, 0.02, 3));
    for d in 0..inst.num_demands() {
        let offers = inst.demand_offers(d);
        let taxi = offers.iter().find(|o| o.id.ends_with("_taxi")).unwrap();
        let tau = taxi.duration();
        // All offers of a demand share its duration.
        assert!(offers.iter().all(|o| o.duration() == tau));
        let mut per_vehicle = std::collections::BTreeMap::new();
        for o in offers {
            if let Resource::Vehicle(v) = o.resource {
                *per_vehicle.entry(v).or_insert(0) += 1;
            }
        }
        assert!(per_vehicle.values().all(|&n| (1..=3).contains(&n)));
    }
}

#[test]
fn generated_instances_validate() {
    for p in AgParams::grid(2).into_iter().filter(|p| p.num_demands == 200).step_by(7) {
        let inst = generate_ag(&p);
        assert_eq!(validate_instance(inst.to_raw()).unwrap(), inst);
    }
    let inst = generate_rw(&RwParams::new(40, 0.1, 3));
    assert_eq!(validate_instance(inst.to_raw()).unwrap(), inst);
}

#[test]
fn rw_is_deterministic() {
    let p = RwParams::new(60, 0.1, 5);
    assert_eq!(generate_rw(&p).to_json(), generate_rw(&p).to_json());
}

#[test]
fn rw_employees_use_their_own_streams() {
    // Adding employees leaves the earlier ones' demands untouched.
    let small = generate_rw(&RwParams::new(30, 0.0, 2));
    let large = generate_rw(&RwParams::new(60, 0.0, 2));
    let key = |inst: &Instance, d: usize| -> Vec<(String, TimeInterval, f64)> {
        inst.demand_offers(d).iter().map(|o| (o.id.clone(), o.interval, o.cost)).collect()
    };
    for (d, dem) in small.demands().iter().enumerate() {
        let k = large.demand_index(&dem.id).unwrap();
        assert_eq!(key(&small, d), key(&large, k));
    }
}

#[test]
fn rw_gamma() {
    assert_eq!(gamma(EventKind::Work, EventKind::Meeting), 1.0);
    assert_eq!(gamma(EventKind::Meeting, EventKind::Work), 1.0);
    assert_eq!(gamma(EventKind::Private, EventKind::Home), 0.0);
    assert_eq!(gamma(EventKind::Work, EventKind::Private), 0.0);
}

#[test]
fn rw_unlimited_modes_need_no_vehicle() {
    let inst = generate_rw(&RwParams::new(80, 0.1, 1));
    assert!(inst.has_classes());
    for o in inst.offers() {
        let mode = MODES.iter().find(|m| o.id.ends_with(&format!("_{}", m.name))).unwrap();
        if mode.limited {
            assert!(matches!(o.resource, Resource::Class(_)), "{}", o.id);
        } else {
            assert_eq!(o.resource, Resource::None, "{}", o.id);
        }
    }
    assert!(plain_offer_count(&inst) >= inst.num_offers());
    // Without a fleet every offer is like walking: no vehicle at all.
    let none = generate_rw(&RwParams::new(40, 0.0, 1));
    assert!(none.vehicles().is_empty());
    assert!(none.offers().iter().all(|o| o.resource == Resource::None));
}

#[test]
fn rw_class_permutation_invariance() {
    let inst = generate_rw(&RwParams::new(30, 0.15, 4));
    let mut raw = inst.to_raw();
    raw.vehicles.reverse();
    let permuted = validate_instance(raw).unwrap();
    let (a, b) = (optimum(&inst).unwrap(), optimum(&permuted).unwrap());
    assert!(moap::model::objectives_match(a, b), "{a} vs {b}");
}

#[test]
fn isma_examples() {
    let opt = |machines: &[(i64, i64)], jobs: &[(i64, i64)]| optimum(&reduce_isma_to_moap(machines, jobs)).unwrap();
    assert_eq!(opt(&[(0, 10)], &[(0, 5), (5, 10)]), 0.0);
    assert_eq!(opt(&[(0, 4)], &[(0, 3), (2, 4)]), 1.0);
    assert_eq!(opt(&[], &[(0, 3)]), 1.0);
    let ok = IsmaInstance { machines: vec![(0, 10)], jobs: vec![(0, 5), (5, 10)] };
    assert!(isma_feasible(&ok));
    let bad = IsmaInstance { machines: vec![(0, 4)], jobs: vec![(0, 3), (2, 4)] };
    assert!(!isma_feasible(&bad));
}

#[test]
fn isma_text_format() {
    let parsed = parse_isma("# two machines\nM 0 10\nmachine 5 20\nJ 1 4  # first\njob 6 9\n").unwrap();
    assert_eq!(parsed.machines, vec![(0, 10), (5, 20)]);
    assert_eq!(parsed.jobs, vec![(1, 4), (6, 9)]);
    assert_eq!(parse_isma("J 4 4").unwrap_err().line, 1);
    assert!(parse_isma("\nX 1 2").is_err());
    let inst = reduce_isma_to_moap(&parsed.machines, &parsed.jobs);
    // Job [1,4) fits machine 1 only, [6,9) both; plus a fallback each.
    assert_eq!(inst.num_offers(), 2 + 3);
}
