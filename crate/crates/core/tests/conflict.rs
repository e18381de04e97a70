mod common;

use common::{conflict_oracle, maximal_cliques_exhaustive, random_instance, Shape};
use moap::conflict::{max_cliques_interval, max_cliques_interval_counted};
use moap::model::{Resource, TimeInterval};
use moap::prelude::*;
use proptest::prelude::*;

fn iv(a: i64, b: i64) -> TimeInterval {
    TimeInterval::new(a, b).unwrap()
}

fn sorted(mut v: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    v.sort();
    v
}

#[test]
fn interval_cliques_examples() {
    let items = [(0, iv(0, 2)), (1, iv(1, 3)), (2, iv(4, 5))];
    assert_eq!(max_cliques_interval(&items), vec![vec![0, 1], vec![2]]);
    assert_eq!(max_cliques_interval(&[(0, iv(0, 2)), (1, iv(2, 4))]), vec![vec![0], vec![1]]);
    assert!(max_cliques_interval(&[]).is_empty());
    // Nested: the long interval sits in both cliques.
    let items = [(0, iv(0, 10)), (1, iv(1, 2)), (2, iv(3, 4))];
    assert_eq!(max_cliques_interval(&items), vec![vec![0, 1], vec![0, 2]]);
}

#[test]
fn edges_match_pairwise_definition() {
    let shape = Shape { max_demands: 6, max_offers: 2, ..Shape::default() };
    for seed in 0..300 {
        let inst = random_instance(seed, shape);
        let g = OfferConflictGraph::build(&inst);
        let n = inst.num_offers();
        let mut vehicle_edges = Vec::new();
        for a in 0..n {
            for b in 0..n {
                assert_eq!(g.conflicts(a, b), conflict_oracle(&inst, a, b), "seed {seed} ({a},{b})");
                let (x, y) = (&inst.offers()[a], &inst.offers()[b]);
                if a < b && x.resource == y.resource && x.resource != Resource::None && x.interval.overlaps(&y.interval) {
                    vehicle_edges.push((a, b));
                }
            }
        }
        assert_eq!(g.vehicle_edges(), vehicle_edges, "seed {seed}");
    }
}

#[test]
fn no_vehicles_means_only_demand_cliques() {
    let shape = Shape { p_none: 1.0, ..Shape::default() };
    let inst = random_instance(7, shape);
    let g = OfferConflictGraph::build(&inst);
    assert!(g.vehicle_edges().is_empty());
    assert!(g.cliques().is_empty());
    assert_eq!(DemandConflictGraph::build(&g).num_edges(), 0);
    let demand_sets: Vec<Vec<usize>> = inst.demands().iter().map(|d| d.offers.clone().collect()).collect();
    assert_eq!(sorted(g.maximal_cliques()), sorted(demand_sets));
}

#[test]
fn maximal_cliques_match_exhaustive_enumeration() {
    let shape = Shape { max_demands: 6, max_offers: 3, distinct_vehicles: true, ..Shape::default() };
    let mut checked = 0;
    let mut seed = 0;
    while checked < 100 {
        seed += 1;
        let inst = random_instance(seed, shape);
        if inst.num_offers() > 14 {
            continue;
        }
        checked += 1;
        let g = OfferConflictGraph::build(&inst);
        let expected = maximal_cliques_exhaustive(inst.num_offers(), |a, b| g.conflicts(a, b));
        let got = sorted(g.maximal_cliques());
        assert_eq!(got, expected, "seed {seed}");
        let per_vehicle: usize = g.vehicle_max_cliques().iter().map(|(_, c)| c.len()).sum();
        assert!(got.len() <= inst.num_demands() + per_vehicle);
    }
}

/// Two offers of one demand on the same vehicle at disjoint times, each
/// overlapping a third offer, form a triangle that is neither a demand set
/// nor a clique of the vehicle's interval graph.
#[test]
fn same_vehicle_offers_of_one_demand_add_mixed_cliques() {
    let raw = r#"{"vehicles": [{"id": "V"}], "demands": [
        {"id": "A", "offers": [
            {"id": "A1", "start": 0, "end": 2, "cost": 1, "vehicle": "V"},
            {"id": "A2", "start": 4, "end": 6, "cost": 1, "vehicle": "V"},
            {"id": "A3", "start": 0, "end": 6, "cost": 5, "vehicle": null}]},
        {"id": "B", "offers": [{"id": "B1", "start": 1, "end": 5, "cost": 1, "vehicle": "V"}]}]}"#;
    let inst = Instance::from_json(raw).unwrap();
    let g = OfferConflictGraph::build(&inst);
    let full = maximal_cliques_exhaustive(inst.num_offers(), |a, b| g.conflicts(a, b));
    let ids = |c: &Vec<usize>| c.iter().map(|&o| inst.offers()[o].id.as_str()).collect::<Vec<_>>();
    assert!(full.iter().any(|c| ids(c) == ["A1", "A2", "B1"]));
    assert_ne!(sorted(g.maximal_cliques()), full);
    // The model stays exact: every vehicle edge is still covered by a row.
    let m = build_model(&inst, &g, Formulation::Clique, false).unwrap();
    let r = solve_bnb(&inst, &m, &BranchAndBoundConfig::default());
    assert_eq!(r.solution.unwrap().objective, 6.0);
}

#[test]
fn demand_graph_matches_pairwise_oracle() {
    for seed in 0..200 {
        let inst = random_instance(seed, Shape::default());
        let g = OfferConflictGraph::build(&inst);
        let dg = DemandConflictGraph::build(&g);
        let mut expected = Vec::new();
        for d in 0..inst.num_demands() {
            for e in d + 1..inst.num_demands() {
                let hit = inst.demands()[d].offers.clone().any(|a| {
                    inst.demands()[e].offers.clone().any(|b| conflict_oracle(&inst, a, b))
                });
                if hit {
                    expected.push((d, e));
                }
            }
        }
        assert_eq!(dg.edges(), expected, "seed {seed}");
    }
}

#[test]
fn sweep_work_is_subquadratic() {
    // Staircase of overlapping intervals, no nesting.
    let family = |n: i64| -> Vec<(usize, TimeInterval)> { (0..n).map(|i| (i as usize, iv(i, i + 5))).collect() };
    let ops = |n: i64| {
        let mut ops = 0;
        max_cliques_interval_counted(&family(n), &mut ops);
        ops as f64
    };
    let ratio = ops(16_000) / ops(2_000);
    // Linear growth is 8, quadratic 64.
    assert!(ratio < 16.0, "ratio {ratio}");
}

fn intervals() -> impl Strategy<Value = Vec<(usize, TimeInterval)>> {
    prop::collection::vec((0i64..50, 1i64..15), 0..40)
        .prop_map(|v| v.into_iter().enumerate().map(|(i, (a, l))| (i, iv(a, a + l))).collect())
}

proptest! {
    #[test]
    fn sweep_output_is_a_maximal_clique_cover(items in intervals()) {
        let cliques = max_cliques_interval(&items);
        let ivs: Vec<TimeInterval> = items.iter().map(|x| x.1).collect();
        prop_assert!(cliques.len() <= items.len());
        for c in &cliques {
            for &a in c {
                for &b in c {
                    prop_assert!(a == b || ivs[a].overlaps(&ivs[b]));
                }
            }
            for other in &cliques {
                prop_assert!(other == c || !c.iter().all(|x| other.contains(x)));
            }
        }
        for i in 0..items.len() {
            prop_assert!(cliques.iter().any(|c| c.contains(&i)));
            for j in i + 1..items.len() {
                if ivs[i].overlaps(&ivs[j]) {
                    prop_assert!(cliques.iter().any(|c| c.contains(&i) && c.contains(&j)));
                }
            }
        }
        let expected = maximal_cliques_exhaustive_small(&ivs);
        if let Some(expected) = expected {
            prop_assert_eq!(sorted(cliques), expected);
        }
    }
}

fn maximal_cliques_exhaustive_small(ivs: &[TimeInterval]) -> Option<Vec<Vec<usize>>> {
    (ivs.len() <= 12).then(|| maximal_cliques_exhaustive(ivs.len(), |a, b| ivs[a].overlaps(&ivs[b])))
}

#[test]
fn vehicle_clique_counts_bounded_by_offers() {
    for seed in 0..100 {
        let inst = random_instance(seed, Shape { max_demands: 20, ..Shape::default() });
        let g = OfferConflictGraph::build(&inst);
        for (v, cliques) in g.vehicle_max_cliques() {
            let n = inst.offers().iter().filter(|o| o.resource == Resource::Vehicle(v)).count();
            assert!(cliques.len() <= n);
        }
    }
}
