//! Hand-derived values for the three-demand, two-vehicle example.

mod common;

use common::{demand, offer, select, three_demands};
use moap::alns::conflict_bfs_from;
use moap::exact::{export_model, lp_relaxation_bound, ExportFormat};
use moap::model::Violation;
use moap::prelude::*;

#[test]
fn fixture_validates() {
    let inst = three_demands();
    assert_eq!(inst.num_demands(), 3);
    assert_eq!(inst.vehicles().len(), 2);
    assert_eq!(inst.num_offers(), 9);
    assert_eq!(inst.cheapest_offer_bound(), 2.0 + 3.0 + 1.0);
}

#[test]
fn feasible_selections() {
    let inst = three_demands();
    for ids in [["A3", "B1", "C1"], ["A2", "B2", "C2"], ["A4", "B2", "C3"]] {
        let e = evaluate(&inst, &select(&inst, &ids));
        assert!(e.feasible, "{ids:?}: {:?}", e.violations);
    }
    let e = evaluate(&inst, &select(&inst, &["A3", "B1", "C1"]));
    assert_eq!(e.objective, 9.0);
}

#[test]
fn infeasible_selection_reports_both_overlaps() {
    let inst = three_demands();
    let e = evaluate(&inst, &select(&inst, &["A3", "B1", "C2"]));
    assert!(!e.feasible);
    let v2 = inst.vehicle_index("V2").unwrap();
    let (a3, b1, c2) = (offer(&inst, "A3"), offer(&inst, "B1"), offer(&inst, "C2"));
    let mut expected = vec![
        Violation::Overlap { vehicle: v2, a: a3.min(c2), b: a3.max(c2) },
        Violation::Overlap { vehicle: v2, a: b1.min(c2), b: b1.max(c2) },
    ];
    expected.sort();
    assert_eq!(e.violations, expected);
}

#[test]
fn vehicle_edges() {
    let inst = three_demands();
    let g = OfferConflictGraph::build(&inst);
    let mut named: Vec<(String, String)> = g
        .vehicle_edges()
        .into_iter()
        .map(|(a, b)| {
            let (x, y) = (inst.offers()[a].id.clone(), inst.offers()[b].id.clone());
            if x < y { (x, y) } else { (y, x) }
        })
        .collect();
    named.sort();
    let expected = [("A2", "C1"), ("A3", "C2"), ("B1", "C2")];
    assert_eq!(named, expected.map(|(a, b)| (a.to_string(), b.to_string())));
    // 6 + 1 + 3 same-demand pairs, all three vehicle edges cross demands.
    assert_eq!(g.num_edges(), 13);
}

#[test]
fn demand_graph_edges() {
    let inst = three_demands();
    let dg = DemandConflictGraph::build(&OfferConflictGraph::build(&inst));
    let (a, b, c) = (demand(&inst, "A"), demand(&inst, "B"), demand(&inst, "C"));
    let mut expected = vec![(a.min(c), a.max(c)), (b.min(c), b.max(c))];
    expected.sort();
    assert_eq!(dg.edges(), expected);
}

#[test]
fn cliques_of_v2() {
    let inst = three_demands();
    let g = OfferConflictGraph::build(&inst);
    let v2 = inst.vehicle_index("V2").unwrap();
    let (_, cliques) = g.vehicle_max_cliques().into_iter().find(|(v, _)| *v == v2).unwrap();
    let names: Vec<Vec<&str>> = cliques
        .iter()
        .map(|c| {
            let mut n: Vec<&str> = c.iter().map(|&o| inst.offers()[o].id.as_str()).collect();
            n.sort();
            n
        })
        .collect();
    assert_eq!(names, vec![vec!["A3", "C2"], vec!["B1", "C2"]]);
}

#[test]
fn model_row_counts() {
    let inst = three_demands();
    let g = OfferConflictGraph::build(&inst);
    let clique = build_model(&inst, &g, Formulation::Clique, false).unwrap();
    assert_eq!((clique.assignment_rows.len(), clique.capacity_rows.len()), (3, 3));
    let edge = build_model(&inst, &g, Formulation::Edge, false).unwrap();
    assert_eq!((edge.assignment_rows.len(), edge.capacity_rows.len()), (3, 3));
    assert_eq!(clique.num_vars(), 9);
    // Optimum 9 is integral here; the relaxation cannot beat the per-demand bound.
    let lb = lp_relaxation_bound(&clique);
    assert!(lb >= 6.0 - 1e-9 && lb <= 9.0 + 1e-9, "{lb}");
}

#[test]
fn lp_export() {
    let inst = three_demands();
    let g = OfferConflictGraph::build(&inst);
    let text = export_model(&build_model(&inst, &g, Formulation::Clique, false).unwrap(), ExportFormat::Lp);
    assert!(text.contains("obj: 5 x_A1 + 6 x_A2 + 2 x_A3 + 10 x_A4 + 3 x_B1 + 8 x_B2 + 4 x_C1 + 1 x_C2 + 9 x_C3"));
    assert!(text.contains(" d_B: x_B1 + x_B2 = 1\n"));
    assert!(text.contains("x_B1 + x_C2 <= 1"));
    assert_eq!(text.matches("<= 1").count(), 3);
    assert!(text.trim_end().ends_with("end"));
    let mps = export_model(&build_model(&inst, &g, Formulation::Edge, false).unwrap(), ExportFormat::Mps);
    assert_eq!(mps.lines().filter(|l| l.starts_with(" L ")).count(), 3);
    assert_eq!(mps.lines().filter(|l| l.starts_with(" BV ")).count(), 9);
    assert!(mps.trim_end().ends_with("ENDATA"));
}

#[test]
fn greedy_hand_trace() {
    let inst = three_demands();
    let g = OfferConflictGraph::build(&inst);
    // Min costs A 2, B 3, C 1: B, A, C picks B1, A3, then C1 since C2 is blocked.
    let out = greedy::solve_greedy(&inst, &g, SortCriterion::MaxMinCost, None).unwrap();
    let sol = out.into_solution(&inst).unwrap();
    assert_eq!(sol.selection, select(&inst, &["A3", "B1", "C1"]));
    assert_eq!(sol.objective, 9.0);
    // C first takes C2, which pushes A to A1 and B to B2.
    let out = greedy::solve_greedy(&inst, &g, SortCriterion::MinMinCost, None).unwrap();
    assert_eq!(out.into_solution(&inst).unwrap().selection, select(&inst, &["A1", "B2", "C2"]));
}

#[test]
fn bnb_optimum() {
    let inst = three_demands();
    let g = OfferConflictGraph::build(&inst);
    for f in [Formulation::Clique, Formulation::Edge] {
        let m = build_model(&inst, &g, f, false).unwrap();
        for cfg in [BranchAndBoundConfig::default(), BranchAndBoundConfig::default().with_lp()] {
            let r = solve_bnb(&inst, &m, &cfg);
            assert!(r.optimal);
            assert_eq!(r.solution.unwrap().selection, select(&inst, &["A3", "B1", "C1"]));
        }
    }
}

#[test]
fn conflict_bfs_from_a() {
    let inst = three_demands();
    let dg = DemandConflictGraph::build(&OfferConflictGraph::build(&inst));
    let mut got = conflict_bfs_from(&dg, demand(&inst, "A"), 2);
    got.sort();
    let mut expected = vec![demand(&inst, "A"), demand(&inst, "C")];
    expected.sort();
    assert_eq!(got, expected);
}
