#![allow(dead_code)]

use moap::model::{evaluate, validate_instance, Instance, RawDemand, RawInstance, RawOffer, RawVehicle};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn three_demands() -> Instance {
    Instance::from_json(include_str!("../fixtures/three_demands.json")).unwrap()
}

/// Index of the offer with this id.
pub fn offer(inst: &Instance, id: &str) -> usize {
    inst.offers().iter().position(|o| o.id == id).unwrap_or_else(|| panic!("no offer {id}"))
}

pub fn demand(inst: &Instance, id: &str) -> usize {
    inst.demand_index(id).unwrap()
}

/// Selection from offer ids, listed in demand order.
pub fn select(inst: &Instance, ids: &[&str]) -> Vec<usize> {
    ids.iter().map(|id| offer(inst, id)).collect()
}

#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub max_demands: usize,
    pub max_offers: usize,
    pub max_vehicles: usize,
    pub horizon: i64,
    pub max_len: i64,
    /// Probability that an offer needs no vehicle.
    pub p_none: f64,
    /// At most one offer per demand and vehicle.
    pub distinct_vehicles: bool,
}

impl Default for Shape {
    fn default() -> Self {
        Shape { max_demands: 10, max_offers: 4, max_vehicles: 3, horizon: 24, max_len: 8, p_none: 0.2, distinct_vehicles: false }
    }
}

/// Small random instance with integer costs. Vehicles may be grouped into
/// classes when `classes` is set, in which case every vehicle offer is
/// issued for the class instead.
pub fn random_raw(seed: u64, shape: Shape, classes: bool) -> RawInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nv = rng.gen_range(1..=shape.max_vehicles);
    let nc = if classes { rng.gen_range(1..=nv) } else { 0 };
    let vehicles: Vec<RawVehicle> = (0..nv)
        .map(|v| RawVehicle {
            id: format!("V{v}"),
            class: classes.then(|| format!("K{}", v % nc)),
        })
        .collect();
    let nd = rng.gen_range(1..=shape.max_demands);
    let demands = (0..nd)
        .map(|d| {
            let k = rng.gen_range(1..=shape.max_offers);
            let mut used = vec![false; nv];
            let offers = (0..k)
                .map(|i| {
                    let start = rng.gen_range(0..shape.horizon);
                    let end = start + rng.gen_range(1..=shape.max_len);
                    let cost = rng.gen_range(1..=20) as f64;
                    let (vehicle, class) = if rng.gen_bool(shape.p_none) {
                        (None, None)
                    } else if classes {
                        (None, Some(format!("K{}", rng.gen_range(0..nc))))
                    } else {
                        let v = rng.gen_range(0..nv);
                        if shape.distinct_vehicles && std::mem::replace(&mut used[v], true) {
                            (None, None)
                        } else {
                            (Some(format!("V{v}")), None)
                        }
                    };
                    RawOffer { id: format!("D{d:02}_{i}"), start, end, cost, vehicle, class }
                })
                .collect();
            RawDemand { id: format!("D{d:02}"), offers }
        })
        .collect();
    RawInstance { meta: Default::default(), vehicles, demands }
}

pub fn random_instance(seed: u64, shape: Shape) -> Instance {
    validate_instance(random_raw(seed, shape, false)).unwrap()
}

pub fn random_class_instance(seed: u64, shape: Shape) -> Instance {
    validate_instance(random_raw(seed, shape, true)).unwrap()
}

/// Every total selection, in lexicographic order.
pub fn all_selections(inst: &Instance) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for d in inst.demands() {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                d.offers.clone().map(move |o| {
                    let mut s = prefix.clone();
                    s.push(o);
                    s
                })
            })
            .collect();
    }
    out
}

/// Exhaustive optimum; `None` if no selection is feasible.
pub fn brute_force(inst: &Instance) -> Option<f64> {
    all_selections(inst)
        .iter()
        .map(|s| evaluate(inst, s))
        .filter(|e| e.feasible)
        .map(|e| e.objective)
        .min_by(f64::total_cmp)
}

/// Pairwise conflict definition, straight from the offers.
pub fn conflict_oracle(inst: &Instance, a: usize, b: usize) -> bool {
    let (x, y) = (&inst.offers()[a], &inst.offers()[b]);
    a != b
        && (x.demand == y.demand
            || (x.resource == y.resource
                && !matches!(x.resource, moap::model::Resource::None)
                && x.interval.overlaps(&y.interval)))
}

/// Maximal cliques of an arbitrary graph on `n <= 20` nodes, by subset
/// enumeration.
pub fn maximal_cliques_exhaustive(n: usize, adj: impl Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    assert!(n <= 20);
    let members = |mask: u32| (0..n).filter(move |&i| mask >> i & 1 == 1);
    let is_clique = |mask: u32| {
        members(mask).all(|i| members(mask).all(|j| i == j || adj(i, j)))
    };
    let cliques: Vec<u32> = (1u32..1 << n).filter(|&m| is_clique(m)).collect();
    let mut out: Vec<Vec<usize>> = cliques
        .iter()
        .filter(|&&m| (0..n).all(|i| m >> i & 1 == 1 || !is_clique(m | 1 << i)))
        .map(|&m| members(m).collect())
        .collect();
    out.sort();
    out
}
