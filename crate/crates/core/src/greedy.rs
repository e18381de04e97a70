//! Construction heuristics.
//!
//! [`greedy_select`] walks the demands in a given order and gives each one its
//! cheapest offer that does not conflict with earlier picks. The order comes
//! from one of seven [`SortCriterion`]s. [`greedy_g1mw`] instead always takes
//! the globally cheapest selectable offer.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::conflict::{OfferConflictGraph, SelectionState};
use crate::model::{Instance, Solution};
use crate::rng::{stream, streams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum SortCriterion {
    MinMinCost,
    MaxMinCost,
    MinMinCostPerTime,
    MaxMinCostPerTime,
    MinAveCost,
    MaxAveCost,
    Random,
}

impl SortCriterion {
    pub const ALL: [SortCriterion; 7] = [
        SortCriterion::MinMinCost,
        SortCriterion::MaxMinCost,
        SortCriterion::MinMinCostPerTime,
        SortCriterion::MaxMinCostPerTime,
        SortCriterion::MinAveCost,
        SortCriterion::MaxAveCost,
        SortCriterion::Random,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SortCriterion::MinMinCost => "MinMinCost",
            SortCriterion::MaxMinCost => "MaxMinCost",
            SortCriterion::MinMinCostPerTime => "MinMinCostPerTime",
            SortCriterion::MaxMinCostPerTime => "MaxMinCostPerTime",
            SortCriterion::MinAveCost => "MinAveCost",
            SortCriterion::MaxAveCost => "MaxAveCost",
            SortCriterion::Random => "Random",
        }
    }

    /// Sort key of a demand; smaller keys come first.
    fn key(self, instance: &Instance, d: usize) -> f64 {
        let offers = instance.demand_offers(d);
        let min_cost = || offers.iter().map(|o| o.cost).fold(f64::INFINITY, f64::min);
        let min_rate = || {
            offers
                .iter()
                .map(|o| o.cost / o.duration() as f64)
                .fold(f64::INFINITY, f64::min)
        };
        let ave = || offers.iter().map(|o| o.cost).sum::<f64>() / offers.len() as f64;
        match self {
            SortCriterion::MinMinCost => min_cost(),
            SortCriterion::MaxMinCost => -min_cost(),
            SortCriterion::MinMinCostPerTime => min_rate(),
            SortCriterion::MaxMinCostPerTime => -min_rate(),
            SortCriterion::MinAveCost => ave(),
            SortCriterion::MaxAveCost => -ave(),
            SortCriterion::Random => 0.0,
        }
    }
}

impl fmt::Display for SortCriterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown sort criterion '{0}'")]
pub struct UnknownCriterion(pub String);

impl FromStr for SortCriterion {
    type Err = UnknownCriterion;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        SortCriterion::ALL
            .into_iter()
            .find(|c| c.name().to_ascii_lowercase() == norm)
            .ok_or_else(|| UnknownCriterion(s.to_string()))
    }
}

impl TryFrom<String> for SortCriterion {
    type Error = UnknownCriterion;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<SortCriterion> for String {
    fn from(c: SortCriterion) -> String {
        c.name().to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GreedyError {
    #[error("the Random criterion needs a seed")]
    MissingSeed,
}

/// All demands in the order given by `crit`; ties by ascending demand id.
pub fn order_demands(
    instance: &Instance,
    crit: SortCriterion,
    seed: Option<u64>,
) -> Result<Vec<usize>, GreedyError> {
    let mut order: Vec<usize> = (0..instance.num_demands()).collect();
    if crit == SortCriterion::Random {
        let seed = seed.ok_or(GreedyError::MissingSeed)?;
        order.shuffle(&mut stream(seed, streams::GREEDY_RANDOM));
    } else {
        sort_keyed(instance, crit, &mut order);
    }
    Ok(order)
}

/// Sorts `demands` by `crit`, shuffling with `rng` for [`SortCriterion::Random`].
pub fn sort_by_criterion<R: Rng + ?Sized>(
    instance: &Instance,
    crit: SortCriterion,
    demands: &mut [usize],
    rng: &mut R,
) {
    if crit == SortCriterion::Random {
        demands.sort_unstable();
        demands.shuffle(rng);
    } else {
        sort_keyed(instance, crit, demands);
    }
}

fn sort_keyed(instance: &Instance, crit: SortCriterion, demands: &mut [usize]) {
    let mut keyed: Vec<(f64, usize)> = demands.iter().map(|&d| (crit.key(instance, d), d)).collect();
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    for (slot, (_, d)) in demands.iter_mut().zip(keyed) {
        *slot = d;
    }
}

/// Result of a construction run.
#[derive(Debug, Clone, PartialEq)]
pub struct GreedyOutcome {
    /// Offer per demand; `None` for demands left without a selectable offer.
    pub selection: Vec<Option<usize>>,
    /// Demands that could not be served, in scan order.
    pub unassigned: Vec<usize>,
    /// Cost of the assigned offers.
    pub objective: f64,
    /// Conflict edges used to block offers. Never exceeds the edge count.
    pub edges_touched: usize,
}

impl GreedyOutcome {
    pub fn is_complete(&self) -> bool {
        self.unassigned.is_empty()
    }

    pub fn into_solution(self, instance: &Instance) -> Option<Solution> {
        let selection: Option<Vec<usize>> = self.selection.into_iter().collect();
        selection.map(|s| Solution::new(instance, s))
    }
}

/// Cheapest selectable offer of `d`, ties by offer id.
pub(crate) fn cheapest_selectable(
    instance: &Instance,
    state: &SelectionState<'_>,
    d: usize,
) -> Option<usize> {
    let mut best: Option<usize> = None;
    for o in instance.demands()[d].offers.clone() {
        if state.is_selectable(o)
            && best.map_or(true, |b| {
                instance.offers()[o].cost.total_cmp(&instance.offers()[b].cost) == Ordering::Less
            })
        {
            best = Some(o);
        }
    }
    best
}

/// Selects `offer` and returns the number of conflict edges this blocks.
fn select_counted(instance: &Instance, state: &mut SelectionState<'_>, offer: usize) -> usize {
    let g = state.graph();
    let d = g.offer_demand(offer);
    let cross = g
        .vehicle_neighbors(offer)
        .iter()
        .filter(|&&n| g.offer_demand(n) != d)
        .count();
    state.select(offer);
    cross + instance.demands()[d].offers.len() - 1
}

/// Serves demands in `ordering`, each with its cheapest non-conflicting offer.
pub fn greedy_select(
    instance: &Instance,
    graph: &OfferConflictGraph,
    ordering: &[usize],
) -> GreedyOutcome {
    let mut state = SelectionState::new(graph);
    let mut unassigned = Vec::new();
    let mut objective = 0.0;
    let mut edges_touched = 0;
    for &d in ordering {
        match cheapest_selectable(instance, &state, d) {
            Some(o) => {
                edges_touched += select_counted(instance, &mut state, o);
                objective += instance.offers()[o].cost;
            }
            None => unassigned.push(d),
        }
    }
    GreedyOutcome {
        selection: state.selected().to_vec(),
        unassigned,
        objective,
        edges_touched,
    }
}

/// Repeatedly takes the globally cheapest selectable offer of an unserved
/// demand; ties by (demand id, offer id).
pub fn greedy_g1mw(instance: &Instance, graph: &OfferConflictGraph) -> GreedyOutcome {
    let mut offers: Vec<usize> = (0..instance.num_offers()).collect();
    // Offer indices already follow (demand id, offer id).
    offers.sort_by(|&a, &b| instance.offers()[a].cost.total_cmp(&instance.offers()[b].cost).then(a.cmp(&b)));
    let mut state = SelectionState::new(graph);
    let mut objective = 0.0;
    let mut edges_touched = 0;
    for o in offers {
        if state.is_selectable(o) {
            edges_touched += select_counted(instance, &mut state, o);
            objective += instance.offers()[o].cost;
        }
    }
    let unassigned = (0..instance.num_demands())
        .filter(|&d| state.selected()[d].is_none())
        .collect();
    GreedyOutcome {
        selection: state.selected().to_vec(),
        unassigned,
        objective,
        edges_touched,
    }
}

/// Orders by `crit` and runs [`greedy_select`].
pub fn solve_greedy(
    instance: &Instance,
    graph: &OfferConflictGraph,
    crit: SortCriterion,
    seed: Option<u64>,
) -> Result<GreedyOutcome, GreedyError> {
    let order = order_demands(instance, crit, seed)?;
    Ok(greedy_select(instance, graph, &order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{validate_instance, RawDemand, RawInstance, RawOffer, RawVehicle};

    fn inst(costs: &[&[f64]]) -> Instance {
        let demands = costs
            .iter()
            .enumerate()
            .map(|(d, cs)| RawDemand {
                id: format!("d{}", d + 1),
                offers: cs
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| RawOffer {
                        id: format!("d{}o{}", d + 1, i),
                        start: 0,
                        end: 1 + i as i64,
                        cost: c,
                        vehicle: None,
                        class: None,
                    })
                    .collect(),
            })
            .collect();
        validate_instance(RawInstance {
            demands,
            ..Default::default()
        })
        .unwrap()
    }

    #[test]
    fn max_min_cost_orders_descending() {
        let i = inst(&[&[5.0], &[9.0], &[2.0]]);
        assert_eq!(order_demands(&i, SortCriterion::MaxMinCost, None).unwrap(), vec![1, 0, 2]);
        assert_eq!(order_demands(&i, SortCriterion::MinMinCost, None).unwrap(), vec![2, 0, 1]);
    }

    #[test]
    fn average_tie_breaks_by_id() {
        let i = inst(&[&[4.0, 6.0], &[5.0, 5.0]]);
        assert_eq!(order_demands(&i, SortCriterion::MinAveCost, None).unwrap(), vec![0, 1]);
        assert_eq!(order_demands(&i, SortCriterion::MaxAveCost, None).unwrap(), vec![0, 1]);
    }

    #[test]
    fn random_needs_seed_and_is_reproducible() {
        let i = inst(&[&[1.0], &[2.0], &[3.0], &[4.0], &[5.0]]);
        assert_eq!(
            order_demands(&i, SortCriterion::Random, None),
            Err(GreedyError::MissingSeed)
        );
        let a = order_demands(&i, SortCriterion::Random, Some(3)).unwrap();
        assert_eq!(a, order_demands(&i, SortCriterion::Random, Some(3)).unwrap());
    }

    #[test]
    fn criterion_names_parse() {
        for c in SortCriterion::ALL {
            assert_eq!(c.name().parse::<SortCriterion>().unwrap(), c);
            assert_eq!(c.name().to_lowercase().parse::<SortCriterion>().unwrap(), c);
        }
        assert_eq!("max-min-cost".parse::<SortCriterion>().unwrap(), SortCriterion::MaxMinCost);
        assert!("cheapest".parse::<SortCriterion>().is_err());
    }

    #[test]
    fn g1mw_takes_global_minimum_first() {
        let raw = RawInstance {
            vehicles: vec![RawVehicle { id: "V1".into(), class: None }],
            demands: vec![
                RawDemand {
                    id: "d1".into(),
                    offers: vec![RawOffer { id: "a".into(), start: 0, end: 2, cost: 1.0, vehicle: Some("V1".into()), class: None }],
                },
                RawDemand {
                    id: "d2".into(),
                    offers: vec![
                        RawOffer { id: "b".into(), start: 1, end: 3, cost: 2.0, vehicle: Some("V1".into()), class: None },
                        RawOffer { id: "c".into(), start: 1, end: 3, cost: 10.0, vehicle: None, class: None },
                    ],
                },
            ],
            ..Default::default()
        };
        let i = validate_instance(raw).unwrap();
        let g = OfferConflictGraph::build(&i);
        let out = greedy_g1mw(&i, &g);
        assert_eq!(out.selection, vec![Some(0), Some(2)]);
        assert_eq!(out.objective, 11.0);
        assert!(out.edges_touched <= g.num_edges());
    }
}
