//! Destroy operators. Each returns the demands whose offers are to be
//! deselected, in ascending order.

use rand::seq::index::sample;
use rand::Rng;

use crate::conflict::DemandConflictGraph;
use crate::model::{Instance, Time, TimeInterval};

/// ⌈r · n⌉ clamped to `n`.
pub fn destroy_count(r: f64, n: usize) -> usize {
    ((r * n as f64).ceil() as usize).min(n)
}

/// ⌈r_des · |D|⌉ demands sampled uniformly without replacement.
pub fn destroy_random<R: Rng + ?Sized>(num_demands: usize, r_des: f64, rng: &mut R) -> Vec<usize> {
    let k = destroy_count(r_des, num_demands);
    let mut out = sample(rng, num_demands, k).into_vec();
    out.sort_unstable();
    out
}

/// Destroy window of length ⌈(hi − lo) · r_des⌉ starting at `start`, wrapped
/// to the front of the horizon `[lo, hi)` where it runs past `hi`.
pub fn time_window(lo: Time, hi: Time, r_des: f64, start: Time) -> Vec<TimeInterval> {
    let len = ((hi - lo) as f64 * r_des).ceil() as Time;
    let end = start + len;
    let mut out = Vec::new();
    if let Some(iv) = TimeInterval::new(start, end.min(hi)) {
        out.push(iv);
    }
    if end > hi {
        if let Some(iv) = TimeInterval::new(lo, (lo + end - hi).min(hi)) {
            out.push(iv);
        }
    }
    out
}

/// Demands whose selected offer overlaps `window`.
pub fn destroy_in_window(instance: &Instance, selection: &[usize], window: &[TimeInterval]) -> Vec<usize> {
    selection
        .iter()
        .enumerate()
        .filter(|(_, &o)| {
            let iv = instance.offers()[o].interval;
            window.iter().any(|w| w.overlaps(&iv))
        })
        .map(|(d, _)| d)
        .collect()
}

/// Time interval destroy with a uniformly drawn window start.
pub fn destroy_time_interval<R: Rng + ?Sized>(
    instance: &Instance,
    selection: &[usize],
    r_des: f64,
    rng: &mut R,
) -> Vec<usize> {
    let Some((lo, hi)) = instance.horizon() else {
        return Vec::new();
    };
    let start = rng.gen_range(lo..=hi);
    destroy_in_window(instance, selection, &time_window(lo, hi, r_des, start))
}

/// Breadth-first walks over the demand conflict graph until ⌈r_des · |D|⌉
/// demands are visited; each walk starts at a uniformly drawn unvisited demand.
pub fn destroy_conflict_bfs<R: Rng + ?Sized>(
    graph: &DemandConflictGraph,
    r_des: f64,
    rng: &mut R,
) -> Vec<usize> {
    let n = graph.num_demands();
    let quota = destroy_count(r_des, n);
    let mut visited = vec![false; n];
    let mut out = Vec::with_capacity(quota);
    while out.len() < quota {
        let free: Vec<usize> = (0..n).filter(|&d| !visited[d]).collect();
        let start = free[rng.gen_range(0..free.len())];
        out.extend(graph.bfs(start, quota - out.len(), &mut visited));
    }
    out.sort_unstable();
    out
}

/// Single walk from a given start, as used by [`destroy_conflict_bfs`].
pub fn conflict_bfs_from(graph: &DemandConflictGraph, start: usize, quota: usize) -> Vec<usize> {
    let mut visited = vec![false; graph.num_demands()];
    graph.bfs(start, quota, &mut visited)
}
