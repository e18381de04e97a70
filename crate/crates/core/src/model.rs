//! Domain types shared by every solver: instances, offers, solutions, the
//! canonical JSON file formats and objective/feasibility evaluation.
//!
//! Times are integer ticks in the unit declared by `meta.time_unit`.
//! Absence intervals are half-open, so `[a, b)` and `[b, c)` never overlap.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::Range;
use std::path::Path;

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::Value;
use thiserror::Error;

use crate::conflict::max_cliques_interval;

pub type Time = i64;

/// Relative tolerance used whenever two objective values are compared.
pub const OBJECTIVE_RTOL: f64 = 1e-9;

/// Returns true if `a` and `b` agree to within [`OBJECTIVE_RTOL`].
pub fn objectives_match(a: f64, b: f64) -> bool {
    (a - b).abs() <= OBJECTIVE_RTOL * a.abs().max(b.abs()).max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TimeInterval {
    start: Time,
    end: Time,
}

impl TimeInterval {
    /// Returns `None` for empty or inverted intervals.
    pub fn new(start: Time, end: Time) -> Option<Self> {
        (start < end).then_some(Self { start, end })
    }

    pub fn start(&self) -> Time {
        self.start
    }

    pub fn end(&self) -> Time {
        self.end
    }

    pub fn duration(&self) -> Time {
        self.end - self.start
    }

    pub fn overlaps(&self, other: &TimeInterval) -> bool {
        self.start < other.end && other.start < self.end
    }

    pub fn contains(&self, other: &TimeInterval) -> bool {
        self.start <= other.start && other.end <= self.end
    }
}

impl fmt::Display for TimeInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.start, self.end)
    }
}

/// What an offer occupies while it is selected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Resource {
    /// No fleet vehicle is needed (taxi, public transport, walking).
    None,
    /// A concrete vehicle, by index into [`Instance::vehicles`].
    Vehicle(usize),
    /// Any vehicle of a class, by index into [`Instance::classes`].
    Class(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Offer {
    pub id: String,
    pub demand: usize,
    pub interval: TimeInterval,
    pub cost: f64,
    pub resource: Resource,
}

impl Offer {
    pub fn duration(&self) -> Time {
        self.interval.duration()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Demand {
    pub id: String,
    /// Offers of a demand are stored contiguously.
    pub offers: Range<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vehicle {
    pub id: String,
    pub class: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VehicleClass {
    pub id: String,
    pub vehicles: Vec<usize>,
}

/// A validated problem instance.
///
/// Demands are sorted by id and offers by (demand id, offer id), so indices are
/// stable for a given file. Instances are immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    meta: BTreeMap<String, Value>,
    vehicles: Vec<Vehicle>,
    classes: Vec<VehicleClass>,
    demands: Vec<Demand>,
    offers: Vec<Offer>,
}

impl Instance {
    pub fn meta(&self) -> &BTreeMap<String, Value> {
        &self.meta
    }

    pub fn time_unit(&self) -> &str {
        self.meta
            .get("time_unit")
            .and_then(Value::as_str)
            .unwrap_or("tick")
    }

    /// Name of the instance, taken from `meta.name` when present.
    pub fn name(&self) -> Option<&str> {
        self.meta.get("name").and_then(Value::as_str)
    }

    pub fn vehicles(&self) -> &[Vehicle] {
        &self.vehicles
    }

    pub fn classes(&self) -> &[VehicleClass] {
        &self.classes
    }

    pub fn demands(&self) -> &[Demand] {
        &self.demands
    }

    pub fn offers(&self) -> &[Offer] {
        &self.offers
    }

    pub fn num_demands(&self) -> usize {
        self.demands.len()
    }

    pub fn num_offers(&self) -> usize {
        self.offers.len()
    }

    pub fn demand_offers(&self, demand: usize) -> &[Offer] {
        &self.offers[self.demands[demand].offers.clone()]
    }

    pub fn has_classes(&self) -> bool {
        !self.classes.is_empty()
    }

    /// True if any offer references a vehicle class instead of a vehicle.
    pub fn has_class_offers(&self) -> bool {
        self.offers
            .iter()
            .any(|o| matches!(o.resource, Resource::Class(_)))
    }

    pub fn class_size(&self, class: usize) -> usize {
        self.classes[class].vehicles.len()
    }

    pub fn demand_index(&self, id: &str) -> Option<usize> {
        self.demands
            .binary_search_by(|d| d.id.as_str().cmp(id))
            .ok()
    }

    pub fn vehicle_index(&self, id: &str) -> Option<usize> {
        self.vehicles.iter().position(|v| v.id == id)
    }

    pub fn offer_index(&self, demand: usize, id: &str) -> Option<usize> {
        let range = self.demands[demand].offers.clone();
        self.offers[range.clone()]
            .binary_search_by(|o| o.id.as_str().cmp(id))
            .ok()
            .map(|i| range.start + i)
    }

    /// Smallest start and largest end over all offers.
    pub fn horizon(&self) -> Option<(Time, Time)> {
        let lo = self.offers.iter().map(|o| o.interval.start()).min()?;
        let hi = self.offers.iter().map(|o| o.interval.end()).max()?;
        Some((lo, hi))
    }

    /// Σ over demands of the cheapest offer cost; a lower bound on every selection.
    pub fn cheapest_offer_bound(&self) -> f64 {
        (0..self.num_demands())
            .map(|d| {
                self.demand_offers(d)
                    .iter()
                    .map(|o| o.cost)
                    .fold(f64::INFINITY, f64::min)
            })
            .sum()
    }

    /// Sum of the costs of the selected offers, in demand order.
    pub fn objective(&self, selection: &[usize]) -> f64 {
        selection.iter().map(|&o| self.offers[o].cost).sum()
    }

    pub fn with_meta(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.meta.insert(key.to_string(), value.into());
        self
    }

    /// Replaces every concrete vehicle offer by an offer on the vehicle's own
    /// single-vehicle class. The result is an equivalent class-model instance.
    pub fn with_singleton_classes(&self) -> Result<Instance, ValidationErrors> {
        if self.has_class_offers() {
            return Err(ValidationErrors(vec![ValidationError::Inconsistent(
                "instance already uses class offers".into(),
            )]));
        }
        let mut raw = self.to_raw();
        let class_names: Vec<String> = self.vehicles.iter().map(|v| v.id.clone()).collect();
        for v in &mut raw.vehicles {
            v.class = Some(v.id.clone());
        }
        for d in &mut raw.demands {
            for o in &mut d.offers {
                if let Some(v) = o.vehicle.take() {
                    debug_assert!(class_names.contains(&v));
                    o.class = Some(v);
                }
            }
        }
        validate_instance(raw)
    }

    /// Replaces every class offer by one concrete offer per vehicle of the
    /// class (ids `<offer>@<vehicle>`) and drops the class map.
    pub fn expand_classes(&self) -> Result<Instance, ValidationErrors> {
        let mut raw = self.to_raw();
        for v in &mut raw.vehicles {
            v.class = None;
        }
        for (d, rd) in raw.demands.iter_mut().enumerate() {
            let mut offers = Vec::new();
            for o in self.demand_offers(d) {
                match o.resource {
                    Resource::Class(c) => {
                        for &v in &self.classes[c].vehicles {
                            let vid = &self.vehicles[v].id;
                            offers.push(RawOffer {
                                id: format!("{}@{}", o.id, vid),
                                start: o.interval.start(),
                                end: o.interval.end(),
                                cost: o.cost,
                                vehicle: Some(vid.clone()),
                                class: None,
                            });
                        }
                    }
                    _ => offers.push(self.raw_offer(o)),
                }
            }
            rd.offers = offers;
        }
        validate_instance(raw)
    }

    fn raw_offer(&self, o: &Offer) -> RawOffer {
        let (vehicle, class) = match o.resource {
            Resource::None => (None, None),
            Resource::Vehicle(v) => (Some(self.vehicles[v].id.clone()), None),
            Resource::Class(c) => (None, Some(self.classes[c].id.clone())),
        };
        RawOffer {
            id: o.id.clone(),
            start: o.interval.start(),
            end: o.interval.end(),
            cost: o.cost,
            vehicle,
            class,
        }
    }

    /// Converts back to the file representation, in canonical order.
    pub fn to_raw(&self) -> RawInstance {
        let mut vehicles: Vec<RawVehicle> = self
            .vehicles
            .iter()
            .map(|v| RawVehicle {
                id: v.id.clone(),
                class: v.class.map(|c| self.classes[c].id.clone()),
            })
            .collect();
        vehicles.sort_by(|a, b| a.id.cmp(&b.id));
        RawInstance {
            meta: self.meta.clone(),
            vehicles,
            demands: self
                .demands
                .iter()
                .enumerate()
                .map(|(d, dem)| RawDemand {
                    id: dem.id.clone(),
                    offers: self.demand_offers(d).iter().map(|o| self.raw_offer(o)).collect(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_raw()).expect("instance serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Instance, InstanceError> {
        let raw: RawInstance = serde_json::from_str(text)?;
        Ok(validate_instance(raw)?)
    }
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<Instance, InstanceError> {
    let text = std::fs::read_to_string(path)?;
    Instance::from_json(&text)
}

pub fn write_instance(path: impl AsRef<Path>, instance: &Instance) -> Result<(), InstanceError> {
    std::fs::write(path, instance.to_json())?;
    Ok(())
}

// ---------------------------------------------------------------------------
// File format

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize, Default)]
pub struct RawInstance {
    #[serde(default)]
    pub meta: BTreeMap<String, Value>,
    #[serde(default)]
    pub vehicles: Vec<RawVehicle>,
    pub demands: Vec<RawDemand>,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
pub struct RawVehicle {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Deserialize, Serialize)]
pub struct RawDemand {
    pub id: String,
    pub offers: Vec<RawOffer>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct RawOffer {
    pub id: String,
    pub start: Time,
    pub end: Time,
    pub cost: f64,
    #[serde(default)]
    pub vehicle: Option<String>,
    #[serde(default)]
    pub class: Option<String>,
}

impl Serialize for RawOffer {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(5))?;
        map.serialize_entry("id", &self.id)?;
        map.serialize_entry("start", &self.start)?;
        map.serialize_entry("end", &self.end)?;
        map.serialize_entry("cost", &self.cost)?;
        match &self.class {
            Some(c) => map.serialize_entry("class", c)?,
            None => map.serialize_entry("vehicle", &self.vehicle)?,
        }
        map.end()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValidationError {
    #[error("empty demand '{0}'")]
    EmptyDemand(String),
    #[error("duplicate demand id '{0}'")]
    DuplicateDemand(String),
    #[error("duplicate offer id '{0}'")]
    DuplicateOffer(String),
    #[error("duplicate vehicle id '{0}'")]
    DuplicateVehicle(String),
    #[error("degenerate interval [{start}, {end}) on offer '{offer}'")]
    DegenerateInterval { offer: String, start: Time, end: Time },
    #[error("negative cost {cost} on offer '{offer}'")]
    NegativeCost { offer: String, cost: f64 },
    #[error("non-finite cost on offer '{0}'")]
    NonFiniteCost(String),
    #[error("offer '{offer}' references unknown vehicle '{vehicle}'")]
    DanglingVehicle { offer: String, vehicle: String },
    #[error("offer '{offer}' references unknown vehicle class '{class}'")]
    DanglingClass { offer: String, class: String },
    #[error("offer '{0}' names both a vehicle and a class")]
    VehicleAndClass(String),
    #[error("vehicle '{0}' has no class while other vehicles do")]
    PartialClassMap(String),
    #[error("{0}")]
    Inconsistent(String),
}

/// Every problem found while validating an instance.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationErrors(pub Vec<ValidationError>);

impl fmt::Display for ValidationErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ValidationErrors {}

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("malformed json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid instance: {0}")]
    Invalid(#[from] ValidationErrors),
}

/// Checks every instance invariant and assigns stable internal indices.
pub fn validate_instance(raw: RawInstance) -> Result<Instance, ValidationErrors> {
    let mut errors = Vec::new();

    let mut vehicles_raw = raw.vehicles;
    vehicles_raw.sort_by(|a, b| a.id.cmp(&b.id));
    for w in vehicles_raw.windows(2) {
        if w[0].id == w[1].id {
            errors.push(ValidationError::DuplicateVehicle(w[0].id.clone()));
        }
    }
    let any_class = vehicles_raw.iter().any(|v| v.class.is_some());
    let class_ids: BTreeSet<&str> = vehicles_raw
        .iter()
        .filter_map(|v| v.class.as_deref())
        .collect();
    let class_ids: Vec<String> = class_ids.into_iter().map(str::to_string).collect();
    let mut classes: Vec<VehicleClass> = class_ids
        .iter()
        .map(|id| VehicleClass {
            id: id.clone(),
            vehicles: Vec::new(),
        })
        .collect();
    let mut vehicles = Vec::with_capacity(vehicles_raw.len());
    for (vi, v) in vehicles_raw.iter().enumerate() {
        let class = match &v.class {
            Some(c) => {
                let ci = class_ids.binary_search(c).expect("class collected above");
                classes[ci].vehicles.push(vi);
                Some(ci)
            }
            None => {
                if any_class {
                    errors.push(ValidationError::PartialClassMap(v.id.clone()));
                }
                None
            }
        };
        vehicles.push(Vehicle {
            id: v.id.clone(),
            class,
        });
    }
    let vehicle_lookup: HashMap<&str, usize> = vehicles
        .iter()
        .enumerate()
        .map(|(i, v)| (v.id.as_str(), i))
        .collect();

    let mut demands_raw = raw.demands;
    demands_raw.sort_by(|a, b| a.id.cmp(&b.id));
    for w in demands_raw.windows(2) {
        if w[0].id == w[1].id {
            errors.push(ValidationError::DuplicateDemand(w[0].id.clone()));
        }
    }

    let mut seen_offers = BTreeSet::new();
    let mut demands = Vec::with_capacity(demands_raw.len());
    let mut offers = Vec::new();
    for (di, mut rd) in demands_raw.into_iter().enumerate() {
        if rd.offers.is_empty() {
            errors.push(ValidationError::EmptyDemand(rd.id.clone()));
        }
        rd.offers.sort_by(|a, b| a.id.cmp(&b.id));
        let first = offers.len();
        for ro in rd.offers {
            if !seen_offers.insert(ro.id.clone()) {
                errors.push(ValidationError::DuplicateOffer(ro.id.clone()));
            }
            let interval = match TimeInterval::new(ro.start, ro.end) {
                Some(iv) => iv,
                None => {
                    errors.push(ValidationError::DegenerateInterval {
                        offer: ro.id.clone(),
                        start: ro.start,
                        end: ro.end,
                    });
                    continue;
                }
            };
            if !ro.cost.is_finite() {
                errors.push(ValidationError::NonFiniteCost(ro.id.clone()));
            } else if ro.cost < 0.0 {
                errors.push(ValidationError::NegativeCost {
                    offer: ro.id.clone(),
                    cost: ro.cost,
                });
            }
            let resource = match (&ro.vehicle, &ro.class) {
                (Some(_), Some(_)) => {
                    errors.push(ValidationError::VehicleAndClass(ro.id.clone()));
                    Resource::None
                }
                (Some(v), None) => match vehicle_lookup.get(v.as_str()) {
                    Some(&vi) => Resource::Vehicle(vi),
                    None => {
                        errors.push(ValidationError::DanglingVehicle {
                            offer: ro.id.clone(),
                            vehicle: v.clone(),
                        });
                        Resource::None
                    }
                },
                (None, Some(c)) => match class_ids.binary_search(c) {
                    Ok(ci) => Resource::Class(ci),
                    Err(_) => {
                        errors.push(ValidationError::DanglingClass {
                            offer: ro.id.clone(),
                            class: c.clone(),
                        });
                        Resource::None
                    }
                },
                (None, None) => Resource::None,
            };
            offers.push(Offer {
                id: ro.id,
                demand: di,
                interval,
                cost: ro.cost,
                resource,
            });
        }
        demands.push(Demand {
            id: rd.id,
            offers: first..offers.len(),
        });
    }

    if errors.is_empty() {
        Ok(Instance {
            meta: raw.meta,
            vehicles,
            classes,
            demands,
            offers,
        })
    } else {
        Err(ValidationErrors(errors))
    }
}

// ---------------------------------------------------------------------------
// Solutions and evaluation

/// One selected offer per demand.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    /// Offer index per demand index.
    pub selection: Vec<usize>,
    pub objective: f64,
    /// Concrete vehicle per selected class offer (class model only).
    pub vehicle_assignment: Option<BTreeMap<usize, usize>>,
}

impl Solution {
    pub fn new(instance: &Instance, selection: Vec<usize>) -> Self {
        let objective = instance.objective(&selection);
        Self {
            selection,
            objective,
            vehicle_assignment: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Violation {
    /// Two selected offers need the same vehicle at overlapping times.
    Overlap { vehicle: usize, a: usize, b: usize },
    /// The offer selected for a demand belongs to another demand.
    ForeignOffer { demand: usize, offer: usize },
    /// More selected offers of a class overlap than the class has vehicles.
    ClassCapacity { class: usize, offers: Vec<usize> },
    /// A class offer was assigned a vehicle outside its class.
    WrongClass { offer: usize, vehicle: usize },
    /// Selection length differs from the number of demands.
    NotTotal { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub objective: f64,
    pub feasible: bool,
    pub violations: Vec<Violation>,
}

/// Objective and feasibility of a selection (offer index per demand).
///
/// Class offers without an explicit vehicle assignment are checked against
/// the class capacity.
pub fn evaluate(instance: &Instance, selection: &[usize]) -> Evaluation {
    evaluate_with_assignment(instance, selection, None)
}

pub fn evaluate_solution(instance: &Instance, solution: &Solution) -> Evaluation {
    evaluate_with_assignment(
        instance,
        &solution.selection,
        solution.vehicle_assignment.as_ref(),
    )
}

fn evaluate_with_assignment(
    instance: &Instance,
    selection: &[usize],
    assignment: Option<&BTreeMap<usize, usize>>,
) -> Evaluation {
    let mut violations = Vec::new();
    if selection.len() != instance.num_demands() {
        violations.push(Violation::NotTotal {
            expected: instance.num_demands(),
            got: selection.len(),
        });
    }
    let mut per_vehicle: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    let mut per_class: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (d, &o) in selection.iter().enumerate() {
        let offer = &instance.offers[o];
        if offer.demand != d {
            violations.push(Violation::ForeignOffer { demand: d, offer: o });
        }
        match offer.resource {
            Resource::None => {}
            Resource::Vehicle(v) => per_vehicle.entry(v).or_default().push(o),
            Resource::Class(c) => match assignment.and_then(|a| a.get(&o)) {
                Some(&v) => {
                    if instance.vehicles[v].class != Some(c) {
                        violations.push(Violation::WrongClass { offer: o, vehicle: v });
                    }
                    per_vehicle.entry(v).or_default().push(o);
                }
                None => per_class.entry(c).or_default().push(o),
            },
        }
    }
    for (&v, offers) in &mut per_vehicle {
        offers.sort_by_key(|&o| (instance.offers[o].interval, o));
        for i in 0..offers.len() {
            let a = &instance.offers[offers[i]].interval;
            for &ob in &offers[i + 1..] {
                let b = &instance.offers[ob].interval;
                if b.start() >= a.end() {
                    break;
                }
                let (x, y) = (offers[i].min(ob), offers[i].max(ob));
                violations.push(Violation::Overlap { vehicle: v, a: x, b: y });
            }
        }
    }
    for (&c, offers) in &per_class {
        let capacity = instance.class_size(c);
        let items: Vec<(usize, TimeInterval)> = offers
            .iter()
            .map(|&o| (o, instance.offers[o].interval))
            .collect();
        for clique in max_cliques_interval(&items) {
            if clique.len() > capacity {
                violations.push(Violation::ClassCapacity { class: c, offers: clique });
            }
        }
    }
    violations.sort();
    let objective = selection
        .iter()
        .filter(|&&o| o < instance.offers.len())
        .map(|&o| instance.offers[o].cost)
        .sum();
    Evaluation {
        objective,
        feasible: violations.is_empty(),
        violations,
    }
}

// ---------------------------------------------------------------------------
// Solution file

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub objective: f64,
    pub selection: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vehicle_assignment: Option<BTreeMap<String, String>>,
    pub feasible: bool,
    pub solver: String,
    pub runtime_ms: u64,
    pub seed: Option<u64>,
}

#[derive(Debug, Error)]
pub enum SolutionFileError {
    #[error("unknown demand '{0}'")]
    UnknownDemand(String),
    #[error("unknown offer '{offer}' for demand '{demand}'")]
    UnknownOffer { demand: String, offer: String },
    #[error("unknown vehicle '{0}'")]
    UnknownVehicle(String),
    #[error("offer '{0}' is not selected")]
    UnselectedOffer(String),
    #[error("demand '{0}' has no selected offer")]
    MissingDemand(String),
}

impl SolutionFile {
    pub fn from_solution(
        instance: &Instance,
        solution: &Solution,
        solver: &str,
        runtime_ms: u64,
        seed: Option<u64>,
    ) -> Self {
        let eval = evaluate_solution(instance, solution);
        let selection = solution
            .selection
            .iter()
            .enumerate()
            .map(|(d, &o)| (instance.demands[d].id.clone(), instance.offers[o].id.clone()))
            .collect();
        let vehicle_assignment = solution.vehicle_assignment.as_ref().map(|a| {
            a.iter()
                .map(|(&o, &v)| (instance.offers[o].id.clone(), instance.vehicles[v].id.clone()))
                .collect()
        });
        Self {
            objective: solution.objective,
            selection,
            vehicle_assignment,
            feasible: eval.feasible,
            solver: solver.to_string(),
            runtime_ms,
            seed,
        }
    }

    /// Resolves ids against `instance`; the objective is recomputed.
    pub fn to_solution(&self, instance: &Instance) -> Result<Solution, SolutionFileError> {
        let mut selection = vec![usize::MAX; instance.num_demands()];
        let mut by_offer_id = HashMap::new();
        for (did, oid) in &self.selection {
            let d = instance
                .demand_index(did)
                .ok_or_else(|| SolutionFileError::UnknownDemand(did.clone()))?;
            let o = instance
                .offer_index(d, oid)
                .ok_or_else(|| SolutionFileError::UnknownOffer {
                    demand: did.clone(),
                    offer: oid.clone(),
                })?;
            selection[d] = o;
            by_offer_id.insert(oid.as_str(), o);
        }
        if let Some(d) = selection.iter().position(|&o| o == usize::MAX) {
            return Err(SolutionFileError::MissingDemand(instance.demands[d].id.clone()));
        }
        let vehicle_assignment = match &self.vehicle_assignment {
            None => None,
            Some(map) => {
                let mut out = BTreeMap::new();
                for (oid, vid) in map {
                    let o = *by_offer_id
                        .get(oid.as_str())
                        .ok_or_else(|| SolutionFileError::UnselectedOffer(oid.clone()))?;
                    let v = instance
                        .vehicle_index(vid)
                        .ok_or_else(|| SolutionFileError::UnknownVehicle(vid.clone()))?;
                    out.insert(o, v);
                }
                Some(out)
            }
        };
        let mut sol = Solution::new(instance, selection);
        sol.vehicle_assignment = vehicle_assignment;
        Ok(sol)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("solution serializes");
        s.push('\n');
        s
    }
}
