//! Offer and demand conflict graphs.
//!
//! Two offers conflict when they belong to the same demand or when they need
//! the same vehicle at overlapping times. Restricted to one vehicle the
//! conflicts form an interval graph, so all of its maximal cliques come out
//! of a single endpoint sweep. Those per-vehicle cliques together with the
//! per-demand offer sets cover every edge of the full graph.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use crate::model::{Instance, Resource, TimeInterval};

/// Maximal cliques of the interval graph on `items` (node id, interval).
///
/// Endpoints are swept in ascending time; at equal times right endpoints come
/// first and equal endpoints are ordered by node id. A clique is reported at
/// every right endpoint that directly follows a left endpoint. Cliques are
/// sorted node-id vectors in sweep order.
pub fn max_cliques_interval(items: &[(usize, TimeInterval)]) -> Vec<Vec<usize>> {
    let mut ops = 0;
    max_cliques_interval_counted(items, &mut ops)
}

/// As [`max_cliques_interval`], adding the number of elementary steps
/// (comparisons during sorting plus active-set updates) to `ops`. Output
/// copying is not counted.
pub fn max_cliques_interval_counted(
    items: &[(usize, TimeInterval)],
    ops: &mut u64,
) -> Vec<Vec<usize>> {
    // (time, 0 = right / 1 = left, node)
    let mut events: Vec<(i64, u8, usize)> = Vec::with_capacity(2 * items.len());
    for &(id, iv) in items {
        events.push((iv.start(), 1, id));
        events.push((iv.end(), 0, id));
    }
    events.sort_unstable_by(|a, b| {
        *ops += 1;
        a.cmp(b)
    });
    let mut active = BTreeSet::new();
    let mut prev_left = false;
    let mut cliques = Vec::new();
    for (_, kind, id) in events {
        *ops += 1;
        if kind == 1 {
            active.insert(id);
            prev_left = true;
        } else {
            if prev_left {
                cliques.push(active.iter().copied().collect());
            }
            active.remove(&id);
            prev_left = false;
        }
    }
    cliques
}

/// Offers competing for one vehicle or one vehicle class.
#[derive(Debug, Clone, PartialEq)]
pub struct ResourceGroup {
    pub resource: Resource,
    /// How many of the group's offers may overlap at any instant.
    pub capacity: usize,
    pub offers: Vec<usize>,
    /// Indices into [`OfferConflictGraph::cliques`].
    pub cliques: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Clique {
    pub group: usize,
    pub members: Vec<usize>,
}

/// Offer conflict graph with its per-resource maximal cliques.
#[derive(Debug, Clone)]
pub struct OfferConflictGraph {
    num_offers: usize,
    offer_demand: Vec<usize>,
    demand_offers: Vec<Vec<usize>>,
    groups: Vec<ResourceGroup>,
    cliques: Vec<Clique>,
    offer_cliques: Vec<Vec<usize>>,
    /// Same-resource overlaps for resources of capacity one, sorted.
    vehicle_adj: Vec<Vec<usize>>,
    sweep_ops: u64,
}

impl OfferConflictGraph {
    pub fn build(instance: &Instance) -> Self {
        let n = instance.num_offers();
        let mut groups: Vec<ResourceGroup> = Vec::new();
        let mut vehicle_group = vec![usize::MAX; instance.vehicles().len()];
        let mut class_group = vec![usize::MAX; instance.classes().len()];
        for (o, offer) in instance.offers().iter().enumerate() {
            let (slot, resource, capacity) = match offer.resource {
                Resource::None => continue,
                Resource::Vehicle(v) => (&mut vehicle_group[v], offer.resource, 1),
                Resource::Class(c) => (&mut class_group[c], offer.resource, instance.class_size(c)),
            };
            if *slot == usize::MAX {
                *slot = groups.len();
                groups.push(ResourceGroup {
                    resource,
                    capacity,
                    offers: Vec::new(),
                    cliques: Vec::new(),
                });
            }
            groups[*slot].offers.push(o);
        }
        // Vehicles first, then classes, each by index.
        groups.sort_by_key(|g| g.resource);

        let mut cliques = Vec::new();
        let mut offer_cliques = vec![Vec::new(); n];
        let mut vehicle_adj = vec![Vec::new(); n];
        let mut sweep_ops = 0;
        for (gi, group) in groups.iter_mut().enumerate() {
            let items: Vec<(usize, TimeInterval)> = group
                .offers
                .iter()
                .map(|&o| (o, instance.offers()[o].interval))
                .collect();
            for members in max_cliques_interval_counted(&items, &mut sweep_ops) {
                for &o in &members {
                    offer_cliques[o].push(cliques.len());
                }
                group.cliques.push(cliques.len());
                cliques.push(Clique { group: gi, members });
            }
            if group.capacity == 1 {
                let mut by_start = items;
                by_start.sort_by_key(|&(o, iv)| (iv.start(), o));
                for i in 0..by_start.len() {
                    let (a, ia) = by_start[i];
                    for &(b, ib) in &by_start[i + 1..] {
                        if ib.start() >= ia.end() {
                            break;
                        }
                        vehicle_adj[a].push(b);
                        vehicle_adj[b].push(a);
                    }
                }
            }
        }
        for adj in &mut vehicle_adj {
            adj.sort_unstable();
        }
        let demand_offers = instance
            .demands()
            .iter()
            .map(|d| d.offers.clone().collect())
            .collect();
        Self {
            num_offers: n,
            offer_demand: instance.offers().iter().map(|o| o.demand).collect(),
            demand_offers,
            groups,
            cliques,
            offer_cliques,
            vehicle_adj,
            sweep_ops,
        }
    }

    pub fn num_offers(&self) -> usize {
        self.num_offers
    }

    pub fn num_demands(&self) -> usize {
        self.demand_offers.len()
    }

    pub fn offer_demand(&self, offer: usize) -> usize {
        self.offer_demand[offer]
    }

    /// The offer sets O_d, one per demand.
    pub fn demand_cliques(&self) -> &[Vec<usize>] {
        &self.demand_offers
    }

    pub fn groups(&self) -> &[ResourceGroup] {
        &self.groups
    }

    pub fn cliques(&self) -> &[Clique] {
        &self.cliques
    }

    /// Indices of the resource cliques containing `offer`.
    pub fn offer_cliques(&self, offer: usize) -> &[usize] {
        &self.offer_cliques[offer]
    }

    /// Offers that need the same vehicle as `offer` at an overlapping time.
    pub fn vehicle_neighbors(&self, offer: usize) -> &[usize] {
        &self.vehicle_adj[offer]
    }

    /// Clique lists C^v of every concrete vehicle with at least one offer.
    pub fn vehicle_max_cliques(&self) -> Vec<(usize, Vec<Vec<usize>>)> {
        self.groups
            .iter()
            .filter_map(|g| match g.resource {
                Resource::Vehicle(v) => Some((
                    v,
                    g.cliques.iter().map(|&c| self.cliques[c].members.clone()).collect(),
                )),
                _ => None,
            })
            .collect()
    }

    /// Vehicle conflict edges (a, b) with a < b, sorted.
    pub fn vehicle_edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        for (a, adj) in self.vehicle_adj.iter().enumerate() {
            edges.extend(adj.iter().filter(|&&b| a < b).map(|&b| (a, b)));
        }
        edges
    }

    pub fn num_vehicle_edges(&self) -> usize {
        self.vehicle_adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// |E|: same-demand pairs plus vehicle edges between different demands.
    pub fn num_edges(&self) -> usize {
        let demand_edges: usize = self
            .demand_offers
            .iter()
            .map(|o| o.len() * (o.len().saturating_sub(1)) / 2)
            .sum();
        let cross = self
            .vehicle_adj
            .iter()
            .enumerate()
            .map(|(a, adj)| {
                adj.iter()
                    .filter(|&&b| self.offer_demand[a] != self.offer_demand[b])
                    .count()
            })
            .sum::<usize>()
            / 2;
        demand_edges + cross
    }

    pub fn conflicts(&self, a: usize, b: usize) -> bool {
        a != b
            && (self.offer_demand[a] == self.offer_demand[b]
                || self.vehicle_adj[a].binary_search(&b).is_ok())
    }

    /// Sweep steps spent enumerating resource cliques.
    pub fn sweep_ops(&self) -> u64 {
        self.sweep_ops
    }

    /// The demand sets and resource cliques after removing every set that is
    /// contained in another one. These are exactly the maximal cliques of the
    /// conflict graph when no demand has two offers for the same vehicle and
    /// there are no class offers. Otherwise a demand's offers on one vehicle
    /// can join a common neighbor in a clique that is neither (the model rows
    /// still cover every edge).
    pub fn maximal_cliques(&self) -> Vec<Vec<usize>> {
        let mut all: Vec<Vec<usize>> = self.demand_offers.clone();
        all.extend(
            self.cliques
                .iter()
                .filter(|c| self.groups[c.group].capacity == 1)
                .map(|c| c.members.clone()),
        );
        all.sort();
        all.dedup();
        let keep: Vec<bool> = (0..all.len())
            .map(|i| {
                !all.iter().enumerate().any(|(j, other)| {
                    j != i && other.len() > all[i].len() && is_subset(&all[i], other)
                })
            })
            .collect();
        all.into_iter()
            .zip(keep)
            .filter_map(|(c, k)| k.then_some(c))
            .collect()
    }

    /// Graphviz rendering; vehicle edges solid, same-demand edges dashed.
    pub fn to_dot(&self, instance: &Instance) -> String {
        let mut s = String::from("graph offers {\n");
        for (d, offers) in self.demand_offers.iter().enumerate() {
            let _ = writeln!(s, "  subgraph cluster_{d} {{");
            let _ = writeln!(s, "    label=\"{}\";", instance.demands()[d].id);
            for &o in offers {
                let _ = writeln!(s, "    o{o} [label=\"{}\"];", instance.offers()[o].id);
            }
            for (i, &a) in offers.iter().enumerate() {
                for &b in &offers[i + 1..] {
                    let _ = writeln!(s, "    o{a} -- o{b} [style=dashed];");
                }
            }
            s.push_str("  }\n");
        }
        for (a, b) in self.vehicle_edges() {
            let _ = writeln!(s, "  o{a} -- o{b};");
        }
        s.push_str("}\n");
        s
    }
}

fn is_subset(small: &[usize], big: &[usize]) -> bool {
    small.iter().all(|x| big.binary_search(x).is_ok())
}

/// Quotient of the offer conflict graph under the demand partition.
///
/// Demands are adjacent when some of their offers compete for the same vehicle
/// (or vehicle class) at overlapping times.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemandConflictGraph {
    adj: Vec<Vec<usize>>,
}

impl DemandConflictGraph {
    pub fn build(g: &OfferConflictGraph) -> Self {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); g.num_demands()];
        for clique in &g.cliques {
            let mut ds: Vec<usize> = clique.members.iter().map(|&o| g.offer_demand[o]).collect();
            ds.sort_unstable();
            ds.dedup();
            for (i, &a) in ds.iter().enumerate() {
                for &b in &ds[i + 1..] {
                    adj[a].push(b);
                    adj[b].push(a);
                }
            }
        }
        for a in &mut adj {
            a.sort_unstable();
            a.dedup();
        }
        Self { adj }
    }

    pub fn num_demands(&self) -> usize {
        self.adj.len()
    }

    /// Neighbors in ascending demand index.
    pub fn neighbors(&self, d: usize) -> &[usize] {
        &self.adj[d]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut edges = Vec::new();
        for (a, adj) in self.adj.iter().enumerate() {
            edges.extend(adj.iter().filter(|&&b| a < b).map(|&b| (a, b)));
        }
        edges
    }

    pub fn num_edges(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Breadth-first order from `start`, expanding neighbors by ascending id,
    /// stopping after `limit` demands. Only `start`'s component is visited.
    pub fn bfs(&self, start: usize, limit: usize, visited: &mut [bool]) -> Vec<usize> {
        let mut out = Vec::new();
        if visited[start] || limit == 0 {
            return out;
        }
        let mut queue = VecDeque::from([start]);
        visited[start] = true;
        while let Some(d) = queue.pop_front() {
            out.push(d);
            if out.len() == limit {
                break;
            }
            for &n in &self.adj[d] {
                if !visited[n] {
                    visited[n] = true;
                    queue.push_back(n);
                }
            }
        }
        // Queued but unreported demands are released again.
        for d in queue {
            visited[d] = false;
        }
        out
    }

    pub fn to_dot(&self, instance: &Instance) -> String {
        let mut s = String::from("graph demands {\n");
        for (d, dem) in instance.demands().iter().enumerate() {
            let _ = writeln!(s, "  d{d} [label=\"{}\"];", dem.id);
        }
        for (a, b) in self.edges() {
            let _ = writeln!(s, "  d{a} -- d{b};");
        }
        s.push_str("}\n");
        s
    }
}

/// Incremental selection used by the heuristics.
///
/// Tracks, per offer, how many selected offers block it through a vehicle
/// edge, and per class clique how many of its offers are selected.
#[derive(Debug, Clone)]
pub struct SelectionState<'g> {
    graph: &'g OfferConflictGraph,
    selected: Vec<Option<usize>>,
    blocked: Vec<u32>,
    load: Vec<u32>,
    assigned: usize,
}

impl<'g> SelectionState<'g> {
    pub fn new(graph: &'g OfferConflictGraph) -> Self {
        Self {
            graph,
            selected: vec![None; graph.num_demands()],
            blocked: vec![0; graph.num_offers()],
            load: vec![0; graph.cliques.len()],
            assigned: 0,
        }
    }

    pub fn from_selection(graph: &'g OfferConflictGraph, selection: &[Option<usize>]) -> Self {
        let mut s = Self::new(graph);
        for &o in selection.iter().flatten() {
            s.select(o);
        }
        s
    }

    pub fn graph(&self) -> &'g OfferConflictGraph {
        self.graph
    }

    pub fn selected(&self) -> &[Option<usize>] {
        &self.selected
    }

    pub fn num_assigned(&self) -> usize {
        self.assigned
    }

    pub fn is_complete(&self) -> bool {
        self.assigned == self.selected.len()
    }

    /// Selection as offer per demand, if complete.
    pub fn to_total(&self) -> Option<Vec<usize>> {
        self.selected.iter().copied().collect()
    }

    /// True if selecting `offer` keeps the selection feasible.
    pub fn is_selectable(&self, offer: usize) -> bool {
        let g = self.graph;
        self.selected[g.offer_demand[offer]].is_none()
            && self.blocked[offer] == 0
            && g.offer_cliques[offer].iter().all(|&c| {
                let cap = g.groups[g.cliques[c].group].capacity;
                cap == 1 || (self.load[c] as usize) < cap
            })
    }

    /// Selects `offer` for its demand. Returns the number of vehicle edges
    /// walked.
    pub fn select(&mut self, offer: usize) -> usize {
        let g = self.graph;
        let d = g.offer_demand[offer];
        debug_assert!(self.selected[d].is_none());
        self.selected[d] = Some(offer);
        self.assigned += 1;
        for &n in &g.vehicle_adj[offer] {
            self.blocked[n] += 1;
        }
        for &c in &g.offer_cliques[offer] {
            self.load[c] += 1;
        }
        g.vehicle_adj[offer].len()
    }

    /// Clears demand `d`, returning the offer it had.
    pub fn deselect(&mut self, d: usize) -> Option<usize> {
        let g = self.graph;
        let offer = self.selected[d].take()?;
        self.assigned -= 1;
        for &n in &g.vehicle_adj[offer] {
            self.blocked[n] -= 1;
        }
        for &c in &g.offer_cliques[offer] {
            self.load[c] -= 1;
        }
        Some(offer)
    }
}
