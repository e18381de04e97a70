//! Repair operators. Both complete a partial selection in place.

use rand::Rng;

use crate::conflict::SelectionState;
use crate::exact::{build_completion_model, solve_bnb, BranchAndBoundConfig};
use crate::greedy::{cheapest_selectable, sort_by_criterion, SortCriterion};
use crate::model::{Instance, Solution};

/// Work done by a repair call, used when timing is counted instead of
/// measured.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RepairWork {
    pub offers_scanned: u64,
    pub nodes: u64,
}

/// Greedy completion with a restricted candidate list.
///
/// The open demands are sorted by `crit`; the next demand is drawn uniformly
/// from the first `rcl` remaining ones and gets its cheapest selectable
/// offer. Demands without one stay open. Returns those demands.
pub fn repair_greedy_rcl<R: Rng + ?Sized>(
    instance: &Instance,
    state: &mut SelectionState<'_>,
    crit: SortCriterion,
    rcl: usize,
    rng: &mut R,
    work: &mut RepairWork,
) -> Vec<usize> {
    let mut open: Vec<usize> = (0..state.selected().len())
        .filter(|&d| state.selected()[d].is_none())
        .collect();
    sort_by_criterion(instance, crit, &mut open, rng);
    let rcl = rcl.max(1);
    let mut failed = Vec::new();
    while !open.is_empty() {
        let k = open.len().min(rcl);
        let i = if k == 1 { 0 } else { rng.gen_range(0..k) };
        let d = open.remove(i);
        work.offers_scanned += instance.demands()[d].offers.len() as u64;
        match cheapest_selectable(instance, state, d) {
            Some(o) => {
                state.select(o);
            }
            None => failed.push(d),
        }
    }
    failed
}

/// Optimal completion of the open demands with every current selection
/// fixed, by branch-and-bound under a node cap. A deterministic greedy
/// completion serves as warm start, so a capped search still returns the
/// best completion it saw. Returns `None` if no completion was found.
pub fn repair_exact(
    instance: &Instance,
    state: &SelectionState<'_>,
    crit: SortCriterion,
    node_cap: u64,
    work: &mut RepairWork,
) -> Option<Solution> {
    let model = build_completion_model(instance, state);
    let mut warm = state.clone();
    let mut rng = rand::rngs::mock::StepRng::new(0, 0);
    let failed = repair_greedy_rcl(instance, &mut warm, crit, 1, &mut rng, work);
    let incumbent = if failed.is_empty() {
        warm.to_total().map(|sel| Solution::new(instance, sel))
    } else {
        None
    };
    let cfg = BranchAndBoundConfig {
        node_limit: Some(node_cap),
        incumbent,
        ..Default::default()
    }
    .with_lp();
    let res = solve_bnb(instance, &model, &cfg);
    work.nodes += res.nodes;
    work.offers_scanned += model.num_vars() as u64;
    res.solution
}
