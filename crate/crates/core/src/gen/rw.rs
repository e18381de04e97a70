//! Company mobility instances.
//!
//! A synthetic city of 250 locations hosts a company with two depots, a pool
//! of bikes and cars, and employees with a work week of office time,
//! meetings and private appointments. Every office-to-office tour of an
//! employee is a demand; each transport mode the employee accepts yields an
//! offer. Vehicles of one mode are interchangeable, so limited modes become
//! vehicle-class offers. Times are minutes from Monday 00:00.
//!
//! The empirical city, commuting and preference data of the original
//! benchmark are not public; the distributions below are documented
//! stand-ins and are recorded in the instance metadata.

use std::collections::BTreeMap;

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::model::{validate_instance, Instance, RawDemand, RawInstance, RawOffer, RawVehicle};
use crate::rng::{stream, streams};

pub const NUM_LOCATIONS: usize = 250;
pub const NUM_DEPOTS: usize = 2;
/// Radius of the synthetic city in km.
pub const CITY_RADIUS_KM: f64 = 10.0;
/// CO₂ price in Euro per gram (5 Euro per ton).
pub const CO2_COST_PER_GRAM: f64 = 5e-6;
/// Salary share refunded on non-business legs.
pub const PRIVATE_TIME_SHARE: f64 = 0.8;
const WORK_DAYS: i64 = 5;
const DAY: i64 = 24 * 60;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Mode {
    pub name: &'static str,
    /// CO₂ emissions in g/km.
    pub emissions: f64,
    /// Average speed in km/h.
    pub speed: f64,
    /// Cost per km in Euro.
    pub cost_distance: f64,
    /// Cost per minute in Euro.
    pub cost_time: f64,
    /// Setup time in seconds.
    pub setup: f64,
    /// Route length over aerial distance.
    pub sloping: f64,
    pub limited: bool,
}

const SALARY_PER_MIN: f64 = 0.6;

const fn mode(name: &'static str, emissions: f64, speed: f64, cost_distance: f64, setup: f64, sloping: f64, limited: bool) -> Mode {
    Mode { name, emissions, speed, cost_distance, cost_time: SALARY_PER_MIN, setup, sloping, limited }
}

pub const MODES: [Mode; 9] = [
    mode("foot", 0.0, 5.0, 0.0, 0.0, 1.3, false),
    mode("pt", 60.0, 20.0, 0.12, 300.0, 1.5, false),
    mode("bike", 0.0, 16.0, 0.05, 120.0, 1.3, true),
    mode("bev_smart", 0.0, 30.0, 0.28, 600.0, 1.4, true),
    mode("bev_leaf", 0.0, 30.0, 0.34, 600.0, 1.4, true),
    mode("bev_imiev", 0.0, 30.0, 0.31, 600.0, 1.4, true),
    mode("icev_small", 120.0, 30.0, 0.36, 600.0, 1.4, true),
    mode("icev_large", 175.0, 30.0, 0.55, 600.0, 1.4, true),
    mode("taxi", 150.0, 30.0, 1.40, 300.0, 1.4, false),
];

const FOOT: usize = 0;
const PT: usize = 1;
const BIKE: usize = 2;
const TAXI: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RwParams {
    pub employees: usize,
    /// Fleet size factor: each limited mode gets DU[0, ⌊ν|P|⌋] vehicles.
    pub nu: f64,
    pub seed: u64,
}

impl RwParams {
    pub fn new(employees: usize, nu: f64, seed: u64) -> Self {
        Self { employees, nu, seed }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EventKind {
    Work,
    Meeting,
    Private,
    Home,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Event {
    /// Latest arrival (minutes).
    pub alpha: i64,
    /// Earliest departure (minutes).
    pub beta: i64,
    pub location: usize,
    pub kind: EventKind,
}

/// 1 exactly on legs between a work event and a meeting.
pub fn gamma(from: EventKind, to: EventKind) -> f64 {
    use EventKind::*;
    match (from, to) {
        (Work, Meeting) | (Meeting, Work) => 1.0,
        _ => 0.0,
    }
}

/// Synthetic city: points on a disc, denser near the center. Residential
/// weights fall off slowly with distance from the center, office weights
/// quickly.
#[derive(Debug, Clone)]
pub struct City {
    pub points: Vec<(f64, f64)>,
    pub home_weights: Vec<f64>,
    pub office_weights: Vec<f64>,
}

impl City {
    pub fn generate(rng: &mut ChaCha8Rng) -> Self {
        let mut points = Vec::with_capacity(NUM_LOCATIONS);
        for _ in 0..NUM_LOCATIONS {
            let r = CITY_RADIUS_KM * rng.gen::<f64>().powf(0.75);
            let phi = rng.gen::<f64>() * std::f64::consts::TAU;
            points.push((r * phi.cos(), r * phi.sin()));
        }
        let radius = |p: &(f64, f64)| (p.0 * p.0 + p.1 * p.1).sqrt();
        let home_weights = points.iter().map(|p| 1.0 / (1.0 + radius(p) / 5.0)).collect();
        let office_weights = points.iter().map(|p| (-radius(p) / 2.5).exp()).collect();
        Self { points, home_weights, office_weights }
    }

    pub fn aerial_km(&self, a: usize, b: usize) -> f64 {
        let (p, q) = (self.points[a], self.points[b]);
        ((p.0 - q.0).powi(2) + (p.1 - q.1).powi(2)).sqrt()
    }

    /// Route distance (km), travel time (min) and leg cost (Euro).
    pub fn leg(&self, m: &Mode, a: usize, b: usize) -> (f64, f64, f64) {
        let d = self.aerial_km(a, b) * m.sloping;
        let t = d / m.speed * 60.0;
        let c = m.cost_distance * d + m.cost_time * t + m.emissions * d * CO2_COST_PER_GRAM;
        (d, t, c)
    }
}

/// Accepted modes by combination; taxi is added to every combination.
const COMBINATIONS: [&[usize]; 7] = [
    &[FOOT, PT],
    &[PT],
    &[3, 4, 5, 6, 7],
    &[3, 4, 5],
    &[PT, BIKE, 3, 4, 5, 6, 7],
    &[FOOT, PT, BIKE],
    &[FOOT, PT, BIKE, 3, 4, 5, 6, 7],
];
const COMBO_WEIGHTS_LICENSED: [f64; 7] = [0.20, 0.15, 0.15, 0.15, 0.10, 0.10, 0.15];
const COMBO_WEIGHTS_UNLICENSED: [f64; 7] = [0.40, 0.30, 0.0, 0.0, 0.0, 0.30, 0.0];
const LICENSE_P_FEMALE: f64 = 0.80;
const LICENSE_P_MALE: f64 = 0.88;

#[derive(Debug, Clone)]
pub struct Employee {
    pub female: bool,
    /// 0 boss, 1 middle management, 2 worker.
    pub hierarchy: u8,
    pub depot: usize,
    pub home: usize,
    /// Work start and end within a day (minutes).
    pub work_start: i64,
    pub work_end: i64,
    pub modes: Vec<usize>,
    pub events: Vec<Event>,
}

fn triangular(rng: &mut ChaCha8Rng, lo: f64, mode: f64, hi: f64) -> f64 {
    let u: f64 = rng.gen();
    let f = (mode - lo) / (hi - lo);
    if u < f {
        lo + (u * (hi - lo) * (mode - lo)).sqrt()
    } else {
        hi - ((1.0 - u) * (hi - lo) * (hi - mode)).sqrt()
    }
}

fn round15(x: f64) -> i64 {
    (x / 15.0).round() as i64 * 15
}

fn make_employee(city: &City, depots: &[usize], rng: &mut ChaCha8Rng) -> Employee {
    let female = rng.gen_bool(0.4678);
    let u: f64 = rng.gen();
    let hierarchy = if u < 0.01 { 0 } else if u < 0.11 { 1 } else { 2 };
    let depot = depots[rng.gen_range(0..depots.len())];
    let home = WeightedIndex::new(&city.home_weights).expect("weights").sample(rng);
    let work_start = round15(triangular(rng, 5.0 * 60.0, 8.0 * 60.0, 11.0 * 60.0));
    let base_hours = match (hierarchy, female) {
        (0, _) => 10.0,
        (1, _) => 9.0,
        (_, false) => 8.0,
        (_, true) => 7.0,
    };
    let hours = base_hours + rng.gen_range(-1..=1) as f64 * 0.5;
    let work_end = work_start + (hours * 60.0) as i64;
    let licensed = rng.gen_bool(if female { LICENSE_P_FEMALE } else { LICENSE_P_MALE });
    let weights = if licensed { COMBO_WEIGHTS_LICENSED } else { COMBO_WEIGHTS_UNLICENSED };
    let combo = WeightedIndex::new(weights).expect("weights").sample(rng);
    let mut modes = COMBINATIONS[combo].to_vec();
    modes.push(TAXI);

    let office = WeightedIndex::new(&city.office_weights).expect("weights");
    let homes = WeightedIndex::new(&city.home_weights).expect("weights");
    // Expected meeting minutes per day.
    let meeting_budget = match hierarchy {
        0 => 240,
        1 => 120,
        _ => 20,
    };
    let mut events = Vec::new();
    for day in 0..WORK_DAYS {
        let off = day * DAY;
        let (ws, we) = (off + work_start, off + work_end);
        if rng.gen_bool(0.2) {
            let alpha = ws - 60 - rng.gen_range(2..=4) * 15;
            events.push(Event { alpha, beta: alpha + 60, location: homes.sample(rng), kind: EventKind::Private });
        }
        // Office time is split by meetings into several work events.
        let mut segment_start = ws;
        let mut budget = meeting_budget;
        let mut cursor = ws + 30;
        while budget > 0 {
            let s = rng.gen_range(2..=12) * 15;
            // The last meeting overshoots the budget; keep it with the
            // probability that makes the expected meeting time match.
            if s > budget && !rng.gen_bool(budget as f64 / s as f64) {
                break;
            }
            let alpha = cursor + rng.gen_range(1..=8) * 15;
            if alpha + s + 60 > we {
                break;
            }
            events.push(Event { alpha: segment_start, beta: alpha - 30, location: depot, kind: EventKind::Work });
            events.push(Event { alpha, beta: alpha + s, location: office.sample(rng), kind: EventKind::Meeting });
            segment_start = alpha + s + 30;
            cursor = segment_start;
            budget -= s;
        }
        events.push(Event { alpha: segment_start, beta: we, location: depot, kind: EventKind::Work });
        let mut home_alpha = we + 60;
        if rng.gen_bool(0.65) {
            let alpha = we + rng.gen_range(2..=8) * 15;
            events.push(Event { alpha, beta: alpha + 120, location: homes.sample(rng), kind: EventKind::Private });
            home_alpha = alpha + 120 + 45;
        }
        let next_start = off + DAY + work_start;
        events.push(Event { alpha: home_alpha, beta: next_start - 60, location: home, kind: EventKind::Home });
    }
    Employee { female, hierarchy, depot, home, work_start, work_end, modes, events }
}

/// Office-to-office tours: every maximal run of events between two
/// consecutive work events.
pub fn tours(events: &[Event]) -> Vec<&[Event]> {
    let work: Vec<usize> = events
        .iter()
        .enumerate()
        .filter(|(_, e)| e.kind == EventKind::Work)
        .map(|(i, _)| i)
        .collect();
    work.windows(2)
        .filter(|w| w[1] > w[0] + 1)
        .map(|w| &events[w[0]..=w[1]])
        .collect()
}

/// Absence interval `[a, b)` (minutes) and cost of serving `tour` with `m`.
pub fn tour_offer(city: &City, m: &Mode, tour: &[Event]) -> (i64, i64, f64) {
    let q = tour.len() - 1;
    let half_setup = m.setup / 60.0 / 2.0;
    let (_, t_out, _) = city.leg(m, tour[0].location, tour[1].location);
    let (_, t_back, _) = city.leg(m, tour[q - 1].location, tour[q].location);
    let a = (tour[1].alpha as f64 - t_out - half_setup).floor() as i64;
    let b = (tour[q - 1].beta as f64 + t_back + half_setup).ceil() as i64;
    let setup_cost = m.setup / 60.0 * m.cost_time;
    let mut travel = 0.0;
    for w in tour.windows(2) {
        let (_, t, c) = city.leg(m, w[0].location, w[1].location);
        travel += c - PRIVATE_TIME_SHARE * t * m.cost_time * (1.0 - gamma(w[0].kind, w[1].kind));
    }
    (a, b.max(a + 1), setup_cost + travel)
}

fn round_cents(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

pub fn generate_rw(params: &RwParams) -> Instance {
    let mut world = stream(params.seed, streams::RW_WORLD);
    let city = City::generate(&mut world);
    let office = WeightedIndex::new(&city.office_weights).expect("weights");
    let mut depots = Vec::new();
    while depots.len() < NUM_DEPOTS {
        let l = office.sample(&mut world);
        if !depots.contains(&l) {
            depots.push(l);
        }
    }
    let max_fleet = (params.nu * params.employees as f64).floor() as usize;
    let mut fleet = BTreeMap::new();
    let mut vehicles = Vec::new();
    for m in MODES.iter() {
        if !m.limited {
            continue;
        }
        let n = world.gen_range(0..=max_fleet);
        fleet.insert(m.name, n);
        for i in 0..n {
            vehicles.push(RawVehicle {
                id: format!("{}_{:03}", m.name, i + 1),
                class: Some(m.name.to_string()),
            });
        }
    }

    let width = params.employees.max(1).to_string().len();
    let mut demands = Vec::new();
    for p in 0..params.employees {
        let mut rng = stream(params.seed, streams::RW_EMPLOYEE + p as u64);
        let emp = make_employee(&city, &depots, &mut rng);
        for (i, tour) in tours(&emp.events).into_iter().enumerate() {
            let did = format!("P{:0width$}_{:02}", p + 1, i + 1);
            let mut offers = Vec::new();
            for &k in &emp.modes {
                let m = &MODES[k];
                if m.limited && fleet[m.name] == 0 {
                    continue;
                }
                let (a, b, cost) = tour_offer(&city, m, tour);
                offers.push(RawOffer {
                    id: format!("{did}_{}", m.name),
                    start: a,
                    end: b,
                    cost: round_cents(cost),
                    vehicle: None,
                    class: m.limited.then(|| m.name.to_string()),
                });
            }
            demands.push(RawDemand { id: did, offers });
        }
    }

    let mut meta = BTreeMap::new();
    meta.insert("generator".into(), json!("rw"));
    meta.insert("time_unit".into(), json!("minute"));
    meta.insert("employees".into(), json!(params.employees));
    meta.insert("nu".into(), json!(params.nu));
    meta.insert("seed".into(), json!(params.seed));
    meta.insert("fleet".into(), json!(fleet));
    meta.insert("depots".into(), json!(depots));
    meta.insert(
        "name".into(),
        json!(format!("rw_p{}_nu{}_s{}", params.employees, params.nu, params.seed)),
    );
    meta.insert(
        "distributions".into(),
        json!({
            "locations": "250 points on a 10 km disc, radius ~ U^0.75",
            "home_weight": "1 / (1 + r/5)",
            "office_weight": "exp(-r/2.5)",
            "work_start": "triangular(5h, 8h, 11h), 15 min steps",
            "daily_hours": "boss 10, middle 9, male worker 8, female worker 7, plus {-0.5, 0, 0.5}",
            "meeting_minutes_per_day": "expected boss 240, middle 120, worker 20",
            "meeting_duration": "uniform {30, 45, ..., 180}",
            "license": "female 0.80, male 0.88",
            "sloping": "foot/bike 1.3, car/taxi 1.4, pt 1.5",
            "salary_per_minute": SALARY_PER_MIN,
        }),
    );
    validate_instance(RawInstance { meta, vehicles, demands }).expect("generated instance is valid")
}

/// Number of offers after expanding every class offer to its vehicles.
pub fn plain_offer_count(instance: &Instance) -> usize {
    instance
        .offers()
        .iter()
        .map(|o| match o.resource {
            crate::model::Resource::Class(c) => instance.class_size(c),
            _ => 1,
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_only_on_business_legs() {
        assert_eq!(gamma(EventKind::Work, EventKind::Meeting), 1.0);
        assert_eq!(gamma(EventKind::Meeting, EventKind::Work), 1.0);
        assert_eq!(gamma(EventKind::Private, EventKind::Home), 0.0);
        assert_eq!(gamma(EventKind::Work, EventKind::Home), 0.0);
    }

    #[test]
    fn tours_run_between_work_events() {
        let ev = |kind| Event { alpha: 0, beta: 1, location: 0, kind };
        let events = [
            ev(EventKind::Work),
            ev(EventKind::Meeting),
            ev(EventKind::Work),
            ev(EventKind::Work),
            ev(EventKind::Private),
            ev(EventKind::Home),
            ev(EventKind::Work),
        ];
        let t = tours(&events);
        assert_eq!(t.len(), 2);
        assert_eq!(t[0].len(), 3);
        assert_eq!(t[1].len(), 4);
    }

    #[test]
    fn small_company_is_valid() {
        let inst = generate_rw(&RwParams::new(20, 0.1, 3));
        assert!(inst.num_demands() > 20);
        assert!(inst.has_classes());
    }
}
