use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use thiserror::Error;

use crate::model::{Instance, Resource, Solution};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssignError {
    #[error("capacity exceeded: class '{class}' has no free vehicle for offer '{offer}'")]
    CapacityExceeded { class: String, offer: String },
}

/// Gives every selected class offer a concrete vehicle of its class.
///
/// Offers of a class are taken by start time and each gets the free vehicle
/// listed first in the class, so a class uses exactly as many vehicles as
/// its selected offers overlap at most.
pub fn assign_vehicles(instance: &Instance, solution: &Solution) -> Result<Solution, AssignError> {
    let mut per_class: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &o in &solution.selection {
        if let Resource::Class(c) = instance.offers()[o].resource {
            per_class.entry(c).or_default().push(o);
        }
    }
    let mut assignment = BTreeMap::new();
    for (c, mut offers) in per_class {
        let class = &instance.classes()[c];
        offers.sort_by_key(|&o| (instance.offers()[o].interval.start(), o));
        // Positions within the class, smallest first.
        let mut free: BinaryHeap<Reverse<usize>> = (0..class.vehicles.len()).map(Reverse).collect();
        let mut busy: BinaryHeap<Reverse<(i64, usize)>> = BinaryHeap::new();
        for o in offers {
            let iv = instance.offers()[o].interval;
            while let Some(&Reverse((end, k))) = busy.peek() {
                if end > iv.start() {
                    break;
                }
                busy.pop();
                free.push(Reverse(k));
            }
            let Some(Reverse(k)) = free.pop() else {
                return Err(AssignError::CapacityExceeded {
                    class: class.id.clone(),
                    offer: instance.offers()[o].id.clone(),
                });
            };
            busy.push(Reverse((iv.end(), k)));
            assignment.insert(o, class.vehicles[k]);
        }
    }
    let mut out = solution.clone();
    out.vehicle_assignment = Some(assignment);
    Ok(out)
}
