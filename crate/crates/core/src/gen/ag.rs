//! Artificial instances: a mixed fleet in four categories, demands with a
//! minimum category, and per-vehicle offers plus taxi and public transport
//! fallbacks. Times are hours over a four-week horizon.

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::model::{validate_instance, Instance, RawDemand, RawInstance, RawOffer, RawVehicle};
use crate::rng::{stream, streams};

/// Planning horizon in hours (four weeks).
pub const HORIZON: i64 = 24 * 7 * 4;
pub const CATEGORY_COST_FACTORS: [f64; 4] = [2.0, 3.0, 4.0, 7.0];
pub const CATEGORY_PORTIONS: [f64; 4] = [0.15, 0.35, 0.35, 0.15];
/// Fleet calibration constant: expected vehicle-hours per demand-hour.
pub const FLEET_CALIBRATION: f64 = 0.4471;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgParams {
    pub num_demands: usize,
    /// Fleet utilization rate in (0, 1].
    pub pu: f64,
    /// Vehicle acceptance probability.
    pub pa: f64,
    /// Long demand probability.
    pub pl: f64,
    pub seed: u64,
}

impl AgParams {
    pub fn new(num_demands: usize, pu: f64, pa: f64, pl: f64, seed: u64) -> Self {
        Self { num_demands, pu, pa, pl, seed }
    }

    /// The 144 parameter combinations of the benchmark grid.
    pub fn grid(seed: u64) -> Vec<AgParams> {
        let mut out = Vec::new();
        for d in [200, 1000, 2000, 5000] {
            for pu in [0.2, 0.4, 0.6, 0.8] {
                for pa in [0.4, 0.6, 0.8] {
                    for pl in [0.01, 0.02, 0.05] {
                        out.push(AgParams::new(d, pu, pa, pl, seed));
                    }
                }
            }
        }
        out
    }
}

/// Expected base duration of a demand in hours.
pub fn expected_duration(pl: f64) -> f64 {
    (1.0 - pl) * 3.5 + pl * (7.0 + HORIZON as f64) / 2.0
}

/// Vehicles per category: ⌈portion · |D| · E[τ] · κ / (H · P_u)⌉.
pub fn fleet_size(num_demands: usize, pu: f64, pl: f64) -> [usize; 4] {
    let raw = num_demands as f64 * expected_duration(pl) * FLEET_CALIBRATION / (HORIZON as f64 * pu);
    CATEGORY_PORTIONS.map(|p| (p * raw - 1e-9).ceil().max(0.0) as usize)
}

pub fn generate_ag(params: &AgParams) -> Instance {
    let fleet = fleet_size(params.num_demands, params.pu, params.pl);
    let mut vehicles = Vec::new();
    let mut vehicle_category = Vec::new();
    for (cat, &n) in fleet.iter().enumerate() {
        for k in 0..n {
            vehicles.push(RawVehicle {
                id: format!("V{}_{:03}", cat + 1, k + 1),
                class: None,
            });
            vehicle_category.push(cat);
        }
    }
    let category_dist = WeightedIndex::new(CATEGORY_PORTIONS).expect("valid portions");
    let width = params.num_demands.max(1).to_string().len();

    let mut demands = Vec::with_capacity(params.num_demands);
    for d in 0..params.num_demands {
        let mut rng = stream(params.seed, streams::AG_DEMAND + d as u64);
        let did = format!("D{:0width$}", d + 1);
        let min_cat = category_dist.sample(&mut rng);
        let duration: i64 = if rng.gen_bool(params.pl) {
            rng.gen_range(7..=HORIZON)
        } else {
            rng.gen_range(1..=6)
        };
        let rate: i64 = rng.gen_range(10..=30);
        let week = rng.gen_range(0..4) * 168;
        let mut offers = Vec::new();
        for (v, vehicle) in vehicles.iter().enumerate() {
            if vehicle_category[v] < min_cat || !rng.gen_bool(params.pa) {
                continue;
            }
            let count = rng.gen_range(1..=3);
            let mut starts: Vec<i64> = Vec::with_capacity(count);
            while starts.len() < count {
                let s = week + rng.gen_range(2..=168);
                if !starts.contains(&s) {
                    starts.push(s);
                }
            }
            for (i, s) in starts.into_iter().enumerate() {
                offers.push(RawOffer {
                    id: format!("{did}_{}_{}", vehicle.id, i + 1),
                    start: s,
                    end: s + duration,
                    cost: (rate * duration) as f64 * CATEGORY_COST_FACTORS[vehicle_category[v]],
                    vehicle: Some(vehicle.id.clone()),
                    class: None,
                });
            }
        }
        let base = (rate * duration) as f64 * CATEGORY_COST_FACTORS[min_cat];
        let start = week + rng.gen_range(2..=168);
        let taxi_pct: i64 = rng.gen_range(300..=600);
        offers.push(RawOffer {
            id: format!("{did}_taxi"),
            start,
            end: start + duration,
            cost: base * taxi_pct as f64 / 100.0,
            vehicle: None,
            class: None,
        });
        if rng.gen_bool(0.5) {
            let pt_pct: i64 = rng.gen_range(100..=300);
            offers.push(RawOffer {
                id: format!("{did}_pt"),
                start,
                end: start + duration,
                cost: base * pt_pct as f64 / 100.0,
                vehicle: None,
                class: None,
            });
        }
        demands.push(RawDemand { id: did, offers });
    }

    let mut meta = std::collections::BTreeMap::new();
    meta.insert("generator".into(), json!("ag"));
    meta.insert("time_unit".into(), json!("hour"));
    meta.insert("num_demands".into(), json!(params.num_demands));
    meta.insert("pu".into(), json!(params.pu));
    meta.insert("pa".into(), json!(params.pa));
    meta.insert("pl".into(), json!(params.pl));
    meta.insert("seed".into(), json!(params.seed));
    meta.insert("horizon".into(), json!(HORIZON));
    meta.insert("fleet".into(), json!(fleet));
    meta.insert(
        "name".into(),
        json!(format!(
            "ag_d{}_pu{}_pa{}_pl{}_s{}",
            params.num_demands,
            (params.pu * 100.0).round(),
            params.pa,
            params.pl,
            params.seed
        )),
    );
    validate_instance(RawInstance { meta, vehicles, demands }).expect("generated instance is valid")
}
