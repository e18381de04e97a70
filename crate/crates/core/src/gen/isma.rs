//! Interval scheduling with machine availabilities.
//!
//! Machine `m` is available on `[a_m, b_m)`, job `j` occupies `[s_j, f_j)`.
//! The instance is feasible if every job can be put on an available machine
//! without two jobs overlapping on one machine. The reduction maps each job
//! to a demand with a free offer per machine that can take it and a cost-1
//! fallback, so the instance is feasible exactly when the optimum is below 1.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::json;

use crate::model::{validate_instance, Instance, RawDemand, RawInstance, RawOffer, RawVehicle, Time};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct IsmaInstance {
    pub machines: Vec<(Time, Time)>,
    pub jobs: Vec<(Time, Time)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsmaParseError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for IsmaParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for IsmaParseError {}

/// Parses lines `M a b` (or `machine a b`) and `J s f` (or `job s f`).
/// Blank lines and text after `#` are ignored.
pub fn parse_isma(text: &str) -> Result<IsmaInstance, IsmaParseError> {
    let mut out = IsmaInstance::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| IsmaParseError { line: i + 1, message };
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(err(format!("expected `<kind> <start> <end>`, got `{line}`")));
        }
        let a: Time = parts[1].parse().map_err(|_| err(format!("bad start `{}`", parts[1])))?;
        let b: Time = parts[2].parse().map_err(|_| err(format!("bad end `{}`", parts[2])))?;
        if b <= a {
            return Err(err(format!("empty interval [{a}, {b})")));
        }
        match parts[0].to_ascii_lowercase().as_str() {
            "m" | "machine" => out.machines.push((a, b)),
            "j" | "job" => out.jobs.push((a, b)),
            other => return Err(err(format!("unknown kind `{other}`"))),
        }
    }
    Ok(out)
}

pub fn reduce_isma_to_moap(machines: &[(Time, Time)], jobs: &[(Time, Time)]) -> Instance {
    let vehicles: Vec<RawVehicle> = (0..machines.len())
        .map(|m| RawVehicle { id: format!("M{}", m + 1), class: None })
        .collect();
    let demands = jobs
        .iter()
        .enumerate()
        .map(|(j, &(s, f))| {
            let did = format!("J{}", j + 1);
            let mut offers: Vec<RawOffer> = machines
                .iter()
                .enumerate()
                .filter(|(_, &(a, b))| a <= s && f <= b)
                .map(|(m, _)| RawOffer {
                    id: format!("{did}_M{}", m + 1),
                    start: s,
                    end: f,
                    cost: 0.0,
                    vehicle: Some(format!("M{}", m + 1)),
                    class: None,
                })
                .collect();
            offers.push(RawOffer {
                id: format!("{did}_none"),
                start: s,
                end: f,
                cost: 1.0,
                vehicle: None,
                class: None,
            });
            RawDemand { id: did, offers }
        })
        .collect();
    let mut meta = BTreeMap::new();
    meta.insert("generator".into(), json!("isma"));
    meta.insert("machines".into(), json!(machines.len()));
    meta.insert("jobs".into(), json!(jobs.len()));
    validate_instance(RawInstance { meta, vehicles, demands }).expect("reduction yields a valid instance")
}

/// Exhaustive feasibility check, exponential in the number of jobs.
pub fn isma_feasible(inst: &IsmaInstance) -> bool {
    let mut order: Vec<usize> = (0..inst.jobs.len()).collect();
    order.sort_by_key(|&j| inst.jobs[j]);
    let mut placed: Vec<Vec<(Time, Time)>> = vec![Vec::new(); inst.machines.len()];
    place(inst, &order, 0, &mut placed)
}

fn place(inst: &IsmaInstance, order: &[usize], k: usize, placed: &mut [Vec<(Time, Time)>]) -> bool {
    let Some(&j) = order.get(k) else {
        return true;
    };
    let (s, f) = inst.jobs[j];
    for m in 0..inst.machines.len() {
        let (a, b) = inst.machines[m];
        if s < a || f > b || placed[m].iter().any(|&(x, y)| s < y && x < f) {
            continue;
        }
        placed[m].push((s, f));
        if place(inst, order, k + 1, placed) {
            return true;
        }
        placed[m].pop();
    }
    false
}
