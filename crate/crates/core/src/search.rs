//! Neighbor generation and best-first path finding over the grid index.
//!
//! A search node is an indexed point, or the query origin itself. From a
//! point, the search may continue along its own trajectory or segment, or
//! switch onto the successor of any other item's point that shares its grid
//! cell (trajectory points only when they pass the departure-time filter).
//! The origin connects to every eligible point in its own cell.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cost::{heuristic, transition_cost, CostError, CostPair, CostParams, Transition, TransitionKind};
use crate::geo::{day_class, haversine_m, time_of_day, CellId, GeoError, GeoPoint};
use crate::index::{GridIndex, PointRef, SourceKind, TemporalFilter};

/// Largest index [`materialize_transition_graph`] agrees to enumerate.
pub const MAX_MATERIALIZED_POINTS: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SearchError {
    #[error("query point outside the index: {0}")]
    OutOfBounds(#[from] GeoError),
    #[error("no path found after {expansions} expansions (closest approach {nearest_m:.1} m)")]
    NoPath { expansions: usize, nearest_m: f64 },
    #[error(transparent)]
    Cost(#[from] CostError),
    #[error("index has {points} points, more than the {limit} allowed for materialization")]
    TooLarge { points: usize, limit: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Query {
    pub origin: GeoPoint,
    pub dest: GeoPoint,
    /// Departure time, epoch seconds.
    pub depart_ts: i64,
}

impl Query {
    pub fn new(origin: GeoPoint, dest: GeoPoint, depart_ts: i64) -> Self {
        Self {
            origin,
            dest,
            depart_ts,
        }
    }

    pub fn temporal_filter(&self, params: &CostParams) -> TemporalFilter {
        TemporalFilter::around(self.depart_ts, params.w_time)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchOptions {
    /// Also board from the eight cells around the origin cell.
    pub adjacent_origin_cells: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NodeKey {
    Origin,
    Point(PointRef),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchNode {
    pub key: NodeKey,
    pub g_search: f64,
    pub g_base: f64,
    pub f: f64,
    /// Arena slot of the predecessor node.
    pub parent: Option<usize>,
    /// How this node was reached.
    pub via: Option<(Transition, CostPair)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub to: PointRef,
    pub transition: Transition,
    pub cost: CostPair,
    pub f: f64,
}

/// Per-query state shared by neighbor generation and the oracle graph.
struct Expander<'a> {
    idx: &'a GridIndex,
    query: Query,
    params: CostParams,
    filter: TemporalFilter,
    origin_cells: Vec<CellId>,
}

impl<'a> Expander<'a> {
    fn new(idx: &'a GridIndex, query: &Query, params: &CostParams, opts: &SearchOptions) -> Result<Self, SearchError> {
        let spec = idx.spec();
        let origin_cell = spec.cell_of(query.origin)?;
        spec.cell_of(query.dest)?;
        let mut origin_cells = vec![origin_cell];
        if opts.adjacent_origin_cells {
            origin_cells = adjacent_cells(origin_cell, spec.cols, spec.rows);
        }
        Ok(Self {
            idx,
            query: *query,
            params: *params,
            filter: query.temporal_filter(params),
            origin_cells,
        })
    }

    fn h(&self, r: PointRef) -> f64 {
        heuristic(self.idx.pos(r), self.query.dest, &self.params)
    }

    fn push(&self, g_search: f64, t: Transition, out: &mut Vec<Neighbor>) -> Result<(), CostError> {
        let cost = transition_cost(self.idx, &t, &self.params)?;
        out.push(Neighbor {
            to: t.to,
            transition: t,
            cost,
            f: g_search + cost.search_s + self.h(t.to),
        });
        Ok(())
    }

    fn expand(&self, key: NodeKey, g_search: f64, out: &mut Vec<Neighbor>) -> Result<(), CostError> {
        out.clear();
        match key {
            NodeKey::Origin => {
                let mut boards = Vec::new();
                for &cell in &self.origin_cells {
                    self.idx.for_each_in_cell(cell, Some(&self.filter), |e| boards.push(e));
                }
                for e in boards {
                    self.push(g_search, Transition::board(e), out)?;
                }
            }
            NodeKey::Point(pk) => {
                if (pk.point as usize) + 1 < self.idx.item_len(pk) {
                    self.push(g_search, Transition::between(pk, pk.with_point(pk.point + 1)), out)?;
                }
                let cell = self
                    .idx
                    .spec()
                    .cell_of(self.idx.pos(pk))
                    .expect("indexed points lie inside the grid");
                let mut targets = Vec::new();
                self.idx.for_each_in_cell(cell, Some(&self.filter), |e| {
                    if !e.same_item(&pk) && (e.point as usize) + 1 < self.idx.item_len(e) {
                        targets.push(e.with_point(e.point + 1));
                    }
                });
                for to in targets {
                    self.push(g_search, Transition::between(pk, to), out)?;
                }
            }
        }
        Ok(())
    }
}

fn adjacent_cells(c: CellId, cols: u32, rows: u32) -> Vec<CellId> {
    let mut out = Vec::with_capacity(9);
    for dr in -1i64..=1 {
        for dc in -1i64..=1 {
            let col = c.col as i64 + dc;
            let row = c.row as i64 + dr;
            if (0..cols as i64).contains(&col) && (0..rows as i64).contains(&row) {
                out.push(CellId::new(col as u32, row as u32));
            }
        }
    }
    out
}

/// Neighbors of `node` with their costs and priorities, using default
/// [`SearchOptions`].
pub fn get_neighbors(idx: &GridIndex, node: &SearchNode, q: &Query, params: &CostParams) -> Result<Vec<Neighbor>, SearchError> {
    let ex = Expander::new(idx, q, params, &SearchOptions::default())?;
    let mut out = Vec::new();
    ex.expand(node.key, node.g_search, &mut out)?;
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Frontier {
    f: f64,
    g: f64,
    seq: u64,
    slot: usize,
}

impl Eq for Frontier {}

impl Ord for Frontier {
    // Reversed so the max-heap pops the lowest f, then the lowest g, then the
    // earliest insertion.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .f
            .total_cmp(&self.f)
            .then_with(|| other.g.total_cmp(&self.g))
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

impl PartialOrd for Frontier {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub expansions: usize,
    pub frontier_peak: usize,
    pub road_legs: usize,
    pub traj_switches: usize,
}

/// One transition of a found route.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RouteStep {
    pub transition: Transition,
    pub cost: CostPair,
}

/// A maximal run of the route along one trajectory or road segment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Leg {
    pub kind: SourceKind,
    pub item: u32,
    pub id: String,
    pub from_idx: u32,
    pub to_idx: u32,
    pub base_s: f64,
    /// Inclusive range of this leg's points within [`RouteResult::path`].
    pub path_from: usize,
    pub path_to: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RouteResult {
    pub path: Vec<GeoPoint>,
    /// Sum of base costs along the route.
    pub eta_s: f64,
    /// Sum of search costs along the route.
    pub search_cost_s: f64,
    pub distance_m: f64,
    pub legs: Vec<Leg>,
    pub steps: Vec<RouteStep>,
    pub stats: SearchStats,
}

impl RouteResult {
    pub fn trivial(origin: GeoPoint, expansions: usize) -> Self {
        Self {
            path: vec![origin],
            eta_s: 0.0,
            search_cost_s: 0.0,
            distance_m: 0.0,
            legs: Vec::new(),
            steps: Vec::new(),
            stats: SearchStats {
                expansions,
                ..Default::default()
            },
        }
    }

    /// Builds geometry, legs, and totals from a transition sequence that
    /// starts at the query origin. Switch steps contribute the switched-to
    /// item's previous point before the reached point, so the drawn line
    /// stays connected.
    pub fn assemble(idx: &GridIndex, origin: GeoPoint, steps: Vec<RouteStep>, mut stats: SearchStats) -> Self {
        let mut path = vec![origin];
        let mut legs: Vec<Leg> = Vec::new();
        let mut eta_s = 0.0;
        let mut search_cost_s = 0.0;
        for step in &steps {
            let t = step.transition;
            eta_s += step.cost.base_s;
            search_cost_s += step.cost.search_s;
            let leg_start = path.len();
            let starts_leg = match t.kind {
                TransitionKind::Board => Some(t.to.point),
                k if k.is_switch() => {
                    path.push(idx.pos(t.to.with_point(t.to.point - 1)));
                    Some(t.to.point - 1)
                }
                _ => None,
            };
            path.push(idx.pos(t.to));
            match (starts_leg, legs.last_mut()) {
                (None, Some(leg)) => {
                    leg.to_idx = t.to.point;
                    leg.base_s += step.cost.base_s;
                    leg.path_to = path.len() - 1;
                }
                (start, _) => {
                    // A boarded point left without moving is not a leg of its own.
                    let carried = match legs.last() {
                        Some(l) if l.path_from == l.path_to => legs.pop().map_or(0.0, |l| l.base_s),
                        _ => 0.0,
                    };
                    legs.push(Leg {
                        kind: t.to.kind,
                        item: t.to.item,
                        id: idx.item_id(t.to).to_string(),
                        from_idx: start.unwrap_or(t.to.point),
                        to_idx: t.to.point,
                        base_s: carried + step.cost.base_s,
                        path_from: leg_start,
                        path_to: path.len() - 1,
                    })
                }
            }
        }
        let distance_m = path.windows(2).map(|w| haversine_m(w[0], w[1])).sum();
        stats.road_legs = legs.iter().filter(|l| l.kind == SourceKind::Road).count();
        stats.traj_switches = steps
            .iter()
            .filter(|s| s.transition.kind == TransitionKind::TrajSwitch)
            .count();
        Self {
            path,
            eta_s,
            search_cost_s,
            distance_m,
            legs,
            steps,
            stats,
        }
    }
}

pub fn find_path(idx: &GridIndex, q: &Query, params: &CostParams) -> Result<RouteResult, SearchError> {
    find_path_with(idx, q, params, &SearchOptions::default())
}

pub fn find_path_with(
    idx: &GridIndex,
    q: &Query,
    params: &CostParams,
    opts: &SearchOptions,
) -> Result<RouteResult, SearchError> {
    params.validate()?;
    let ex = Expander::new(idx, q, params, opts)?;
    if q.origin == q.dest {
        return Ok(RouteResult::trivial(q.origin, 0));
    }

    let mut arena: Vec<SearchNode> = Vec::new();
    let mut heap = BinaryHeap::new();
    let mut visited: HashSet<NodeKey> = HashSet::new();
    let mut g_map: HashMap<NodeKey, f64> = HashMap::new();
    let mut seq = 0u64;
    let mut stats = SearchStats::default();
    let mut nearest_m = f64::INFINITY;
    let mut neighbors = Vec::new();

    let f0 = heuristic(q.origin, q.dest, params);
    arena.push(SearchNode {
        key: NodeKey::Origin,
        g_search: 0.0,
        g_base: 0.0,
        f: f0,
        parent: None,
        via: None,
    });
    g_map.insert(NodeKey::Origin, 0.0);
    heap.push(Frontier {
        f: f0,
        g: 0.0,
        seq,
        slot: 0,
    });

    while let Some(top) = heap.pop() {
        let node = arena[top.slot];
        if visited.contains(&node.key) {
            continue;
        }
        let pos = match node.key {
            NodeKey::Origin => q.origin,
            NodeKey::Point(r) => idx.pos(r),
        };
        let d = haversine_m(pos, q.dest);
        nearest_m = nearest_m.min(d);
        if d < params.d_thres {
            return Ok(reconstruct(idx, q, &arena, top.slot, stats));
        }
        visited.insert(node.key);
        stats.expansions += 1;

        ex.expand(node.key, node.g_search, &mut neighbors)?;
        for nb in neighbors.drain(..) {
            let key = NodeKey::Point(nb.to);
            if visited.contains(&key) {
                continue;
            }
            let g = node.g_search + nb.cost.search_s;
            if g_map.get(&key).is_some_and(|&best| g >= best) {
                continue;
            }
            g_map.insert(key, g);
            arena.push(SearchNode {
                key,
                g_search: g,
                g_base: node.g_base + nb.cost.base_s,
                f: nb.f,
                parent: Some(top.slot),
                via: Some((nb.transition, nb.cost)),
            });
            seq += 1;
            heap.push(Frontier {
                f: nb.f,
                g,
                seq,
                slot: arena.len() - 1,
            });
        }
        stats.frontier_peak = stats.frontier_peak.max(heap.len());
    }

    Err(SearchError::NoPath {
        expansions: stats.expansions,
        nearest_m,
    })
}

fn reconstruct(idx: &GridIndex, q: &Query, arena: &[SearchNode], end: usize, stats: SearchStats) -> RouteResult {
    let mut steps = Vec::new();
    let mut slot = Some(end);
    while let Some(s) = slot {
        let node = &arena[s];
        if let Some((transition, cost)) = node.via {
            steps.push(RouteStep { transition, cost });
        }
        slot = node.parent;
    }
    steps.reverse();
    let mut route = RouteResult::assemble(idx, q.origin, steps, stats);
    // The accumulated values are what the search itself computed.
    route.eta_s = arena[end].g_base;
    route.search_cost_s = arena[end].g_search;
    route
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphEdge {
    pub to: usize,
    pub transition: Transition,
    pub cost: CostPair,
}

/// Every node and transition the search could visit for one query, as an
/// explicit graph. Node 0 is the query origin.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionGraph {
    pub nodes: Vec<NodeKey>,
    pub edges: Vec<Vec<GraphEdge>>,
    /// Nodes closer than `d_thres` to the destination.
    pub targets: Vec<usize>,
}

impl TransitionGraph {
    pub const SOURCE: usize = 0;

    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }
}

/// Enumerates the query's transition graph by brute force over the raw
/// datasets, without the index's temporal range scans.
pub fn materialize_transition_graph(
    idx: &GridIndex,
    q: &Query,
    params: &CostParams,
    opts: &SearchOptions,
) -> Result<TransitionGraph, SearchError> {
    params.validate()?;
    let total = idx.stats().traj_points + idx.stats().road_points;
    if total > MAX_MATERIALIZED_POINTS {
        return Err(SearchError::TooLarge {
            points: total,
            limit: MAX_MATERIALIZED_POINTS,
        });
    }
    let spec = idx.spec();
    let origin_cell = spec.cell_of(q.origin)?;
    spec.cell_of(q.dest)?;
    let filter = q.temporal_filter(params);

    struct Pt {
        r: PointRef,
        pos: GeoPoint,
        cell: CellId,
        eligible: bool,
        has_next: bool,
    }
    let mut pts = Vec::with_capacity(total);
    for (i, t) in idx.trajectories().trajectories.iter().enumerate() {
        for (j, p) in t.points.iter().enumerate() {
            pts.push(Pt {
                r: PointRef::traj(i, j),
                pos: p.pos,
                cell: spec.cell_of(p.pos)?,
                eligible: filter.accepts(time_of_day(p.ts), day_class(p.ts)),
                has_next: j + 1 < t.points.len(),
            });
        }
    }
    for (i, s) in idx.roads().segments.iter().enumerate() {
        for (j, p) in s.points.iter().enumerate() {
            pts.push(Pt {
                r: PointRef::road(i, j),
                pos: *p,
                cell: spec.cell_of(*p)?,
                eligible: true,
                has_next: j + 1 < s.points.len(),
            });
        }
    }

    let mut nodes = vec![NodeKey::Origin];
    nodes.extend(pts.iter().map(|p| NodeKey::Point(p.r)));
    let node_of: HashMap<PointRef, usize> = pts.iter().enumerate().map(|(i, p)| (p.r, i + 1)).collect();
    let mut edges = vec![Vec::new(); nodes.len()];
    let edge = |t: Transition| -> Result<GraphEdge, SearchError> {
        Ok(GraphEdge {
            to: node_of[&t.to],
            transition: t,
            cost: crate::cost::cost_final(idx, &t, params)?,
        })
    };

    let boards_from = |cell: CellId| {
        let dc = cell.col.abs_diff(origin_cell.col);
        let dr = cell.row.abs_diff(origin_cell.row);
        if opts.adjacent_origin_cells {
            dc <= 1 && dr <= 1
        } else {
            dc == 0 && dr == 0
        }
    };
    for p in &pts {
        if p.eligible && boards_from(p.cell) {
            edges[0].push(edge(Transition::board(p.r))?);
        }
    }
    let mut by_cell: HashMap<CellId, Vec<usize>> = HashMap::new();
    for (i, p) in pts.iter().enumerate() {
        by_cell.entry(p.cell).or_default().push(i);
    }
    for (i, p) in pts.iter().enumerate() {
        let from = i + 1;
        if p.has_next {
            edges[from].push(edge(Transition::between(p.r, p.r.with_point(p.r.point + 1)))?);
        }
        for e in by_cell[&p.cell].iter().map(|&j| &pts[j]) {
            if e.eligible && e.has_next && !e.r.same_item(&p.r) {
                edges[from].push(edge(Transition::between(p.r, e.r.with_point(e.r.point + 1)))?);
            }
        }
    }

    let mut targets = Vec::new();
    if haversine_m(q.origin, q.dest) < params.d_thres {
        targets.push(TransitionGraph::SOURCE);
    }
    for (i, p) in pts.iter().enumerate() {
        if haversine_m(p.pos, q.dest) < params.d_thres {
            targets.push(i + 1);
        }
    }
    Ok(TransitionGraph { nodes, edges, targets })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geo::GridSpec;
    use crate::ingest::{RoadNetwork, RoadSegment, Trajectory, TrajectoryDb, TrajectoryPoint};

    const MONDAY_8AM: i64 = 1_704_067_200 + 8 * 3_600;

    fn o() -> GeoPoint {
        GeoPoint::new(37.75, -122.45).unwrap()
    }

    fn at(e: f64, n: f64) -> GeoPoint {
        o().offset_m(e, n)
    }

    fn traj(id: &str, pts: &[(f64, f64, i64)]) -> Trajectory {
        Trajectory::new(
            id,
            pts.iter()
                .map(|&(e, n, dt)| TrajectoryPoint {
                    pos: at(e, n),
                    ts: MONDAY_8AM + dt,
                })
                .collect(),
        )
        .unwrap()
    }

    fn index(trajs: Vec<Trajectory>, roads: Vec<RoadSegment>) -> GridIndex {
        GridIndex::build(
            TrajectoryDb::new(trajs).unwrap(),
            RoadNetwork::new(roads).unwrap(),
            GridSpec::new(o(), 100.0, 30, 30).unwrap(),
        )
        .unwrap()
    }

    fn node(r: PointRef) -> SearchNode {
        SearchNode {
            key: NodeKey::Point(r),
            g_search: 0.0,
            g_base: 0.0,
            f: 0.0,
            parent: None,
            via: None,
        }
    }

    #[test]
    fn dead_end_has_no_neighbors() {
        let idx = index(vec![traj("a", &[(50.0, 50.0, 0), (950.0, 50.0, 100)])], vec![]);
        let q = Query::new(at(50.0, 50.0), at(950.0, 950.0), MONDAY_8AM);
        let nbs = get_neighbors(&idx, &node(PointRef::traj(0, 1)), &q, &CostParams::default()).unwrap();
        assert!(nbs.is_empty());
    }

    fn crossing(other_offset_s: i64) -> GridIndex {
        // "a" runs east, "b" runs north; both pass through cell (5, 0).
        index(
            vec![
                traj("a", &[(450.0, 50.0, 0), (550.0, 50.0, 10), (650.0, 50.0, 20)]),
                traj(
                    "b",
                    &[
                        (560.0, 40.0, other_offset_s),
                        (560.0, 150.0, other_offset_s + 15),
                    ],
                ),
            ],
            vec![],
        )
    }

    #[test]
    fn in_window_entry_yields_switch() {
        let idx = crossing(30);
        let q = Query::new(at(450.0, 50.0), at(560.0, 900.0), MONDAY_8AM);
        let params = CostParams::default();
        let nbs = get_neighbors(&idx, &node(PointRef::traj(0, 1)), &q, &params).unwrap();
        let targets: Vec<PointRef> = nbs.iter().map(|n| n.to).collect();
        assert_eq!(targets, [PointRef::traj(0, 2), PointRef::traj(1, 1)]);
        assert_eq!(nbs[1].transition.kind, TransitionKind::TrajSwitch);
        assert_eq!(nbs[1].cost.base_s, 15.0);
        let expected_f = 15.0 + heuristic(at(560.0, 150.0), q.dest, &params);
        assert_eq!(nbs[1].f, expected_f);
    }

    #[test]
    fn out_of_window_entry_is_ignored() {
        let idx = crossing(3 * 3_600);
        let q = Query::new(at(450.0, 50.0), at(560.0, 900.0), MONDAY_8AM);
        let nbs = get_neighbors(&idx, &node(PointRef::traj(0, 1)), &q, &CostParams::default()).unwrap();
        assert_eq!(nbs.len(), 1);
        assert_eq!(nbs[0].to, PointRef::traj(0, 2));
    }

    #[test]
    fn continuation_ignores_window() {
        let idx = index(vec![traj("a", &[(50.0, 50.0, 0), (950.0, 50.0, 50_000)])], vec![]);
        let q = Query::new(at(50.0, 50.0), at(950.0, 50.0), MONDAY_8AM);
        let nbs = get_neighbors(&idx, &node(PointRef::traj(0, 0)), &q, &CostParams::default()).unwrap();
        assert_eq!(nbs.len(), 1);
    }

    #[test]
    fn origin_equals_destination() {
        let idx = crossing(30);
        let q = Query::new(at(450.0, 50.0), at(450.0, 50.0), MONDAY_8AM);
        let r = find_path(&idx, &q, &CostParams::default()).unwrap();
        assert_eq!(r.path, vec![q.origin]);
        assert_eq!(r.eta_s, 0.0);
        assert!(r.legs.is_empty());
    }

    #[test]
    fn straight_trajectory_route() {
        let idx = index(
            vec![traj(
                "a",
                &[(50.0, 50.0, 0), (250.0, 50.0, 20), (450.0, 50.0, 45), (650.0, 50.0, 61), (850.0, 50.0, 90)],
            )],
            vec![],
        );
        let q = Query::new(at(40.0, 40.0), at(640.0, 50.0), MONDAY_8AM);
        let r = find_path(&idx, &q, &CostParams::default()).unwrap();
        // Boards point 0, stops at point 3 (10 m from the destination).
        assert_eq!(r.eta_s, 61.0);
        assert_eq!(r.path.len(), 5);
        assert_eq!(r.legs.len(), 1);
        assert_eq!((r.legs[0].from_idx, r.legs[0].to_idx), (0, 3));
        assert_eq!(r.legs[0].id, "a");
        let resum: f64 = r.steps.iter().map(|s| s.cost.base_s).sum();
        assert_eq!(resum, r.eta_s);
    }

    #[test]
    fn hop_between_two_trajectories() {
        let idx = crossing(30);
        let q = Query::new(at(450.0, 50.0), at(560.0, 150.0), MONDAY_8AM);
        let r = find_path(&idx, &q, &CostParams::default()).unwrap();
        let kinds: Vec<TransitionKind> = r.steps.iter().map(|s| s.transition.kind).collect();
        assert_eq!(
            kinds,
            [TransitionKind::Board, TransitionKind::TrajContinue, TransitionKind::TrajSwitch]
        );
        assert_eq!(r.eta_s, 10.0 + 15.0);
        assert_eq!(r.stats.traj_switches, 1);
        assert_eq!(r.legs.len(), 2);
        assert_eq!((r.legs[1].from_idx, r.legs[1].to_idx), (0, 1));
        // origin, a0, a1, b0 (switch anchor), b1
        assert_eq!(r.path.len(), 5);
        assert_eq!(r.path[3], at(560.0, 40.0));
    }

    #[test]
    fn board_then_cross_is_one_leg() {
        let idx = index(
            vec![traj("slow", &[(50.0, 50.0, 0), (250.0, 50.0, 100), (450.0, 50.0, 200)])],
            vec![RoadSegment::new("r", vec![at(55.0, 55.0), at(250.0, 55.0), at(450.0, 55.0)], 10.0).unwrap()],
        );
        let q = Query::new(at(50.0, 50.0), at(450.0, 50.0), MONDAY_8AM);
        let r = find_path(&idx, &q, &CostParams::default()).unwrap();
        let kinds: Vec<SourceKind> = r.legs.iter().map(|l| l.kind).collect();
        assert_eq!(kinds, [SourceKind::Road]);
        assert_eq!(r.legs[0].base_s, r.eta_s);
        assert_eq!(r.stats.road_legs, 1);
    }

    #[test]
    fn empty_origin_cell_is_no_path() {
        let idx = crossing(30);
        let q = Query::new(at(2_050.0, 2_050.0), at(560.0, 150.0), MONDAY_8AM);
        assert!(matches!(
            find_path(&idx, &q, &CostParams::default()),
            Err(SearchError::NoPath { expansions: 1, .. })
        ));
    }

    #[test]
    fn adjacent_origin_cells_option() {
        let idx = crossing(30);
        // Origin one cell west of the first point of "a".
        let q = Query::new(at(350.0, 50.0), at(670.0, 50.0), MONDAY_8AM);
        assert!(find_path(&idx, &q, &CostParams::default()).is_err());
        let opts = SearchOptions {
            adjacent_origin_cells: true,
        };
        let r = find_path_with(&idx, &q, &CostParams::default(), &opts).unwrap();
        assert_eq!(r.eta_s, 20.0);
    }

    #[test]
    fn out_of_bounds_query() {
        let idx = crossing(30);
        let q = Query::new(at(-500.0, 50.0), at(560.0, 150.0), MONDAY_8AM);
        assert!(matches!(
            find_path(&idx, &q, &CostParams::default()),
            Err(SearchError::OutOfBounds(_))
        ));
    }

    #[test]
    fn road_fallback_between_trajectories() {
        // A road bridges the gap between two trips that never share a cell.
        let idx = index(
            vec![
                traj("west", &[(50.0, 50.0, 0), (150.0, 50.0, 12), (250.0, 50.0, 24)]),
                traj("east", &[(750.0, 50.0, 60), (850.0, 50.0, 72), (950.0, 50.0, 84)]),
            ],
            vec![RoadSegment::new("r", vec![at(260.0, 60.0), at(500.0, 60.0), at(740.0, 60.0)], 10.0).unwrap()],
        );
        let q = Query::new(at(50.0, 50.0), at(950.0, 50.0), MONDAY_8AM);
        let r = find_path(&idx, &q, &CostParams::default()).unwrap();
        let kinds: Vec<SourceKind> = r.legs.iter().map(|l| l.kind).collect();
        assert_eq!(kinds, [SourceKind::Trajectory, SourceKind::Road, SourceKind::Trajectory]);
        assert_eq!(r.stats.road_legs, 1);
        assert_eq!(r.steps.iter().map(|s| s.cost.base_s).sum::<f64>(), r.eta_s);
    }

    #[test]
    fn materialized_single_trajectory() {
        let idx = index(vec![traj("a", &[(50.0, 50.0, 0), (250.0, 50.0, 20), (450.0, 50.0, 40)])], vec![]);
        let q = Query::new(at(40.0, 40.0), at(450.0, 50.0), MONDAY_8AM);
        let params = CostParams::default();
        let g = materialize_transition_graph(&idx, &q, &params, &SearchOptions::default()).unwrap();
        assert_eq!(g.nodes.len(), 4);
        assert_eq!(g.edges[0].len(), 1); // origin boards point 0
        let continues: usize = g.edges[1..].iter().map(Vec::len).sum();
        assert_eq!(continues, 2);
        assert_eq!(g.targets, vec![3]);
        for (from, es) in g.edges.iter().enumerate() {
            for e in es {
                let again = crate::cost::cost_final(&idx, &e.transition, &params).unwrap();
                assert_eq!(again, e.cost, "edge from {from}");
            }
        }
    }

    #[test]
    fn materialized_hop_edge_count() {
        let idx = crossing(30);
        let q = Query::new(at(450.0, 50.0), at(560.0, 150.0), MONDAY_8AM);
        let g = materialize_transition_graph(&idx, &q, &CostParams::default(), &SearchOptions::default()).unwrap();
        // Origin -> a0. Continues: a0->a1, a1->a2, b0->b1. Cell (5,0) holds
        // a1 and b0: a1->b1 (switch), b0->a2 (switch).
        assert_eq!(g.edges[0].len(), 1);
        assert_eq!(g.edge_count(), 1 + 3 + 2);
    }

    #[test]
    fn materialize_guard() {
        let long: Vec<(f64, f64, i64)> = (0..10_001).map(|k| (50.0 + (k % 20) as f64, 50.0, k as i64)).collect();
        let idx = index(vec![traj("big", &long)], vec![]);
        let q = Query::new(at(50.0, 50.0), at(950.0, 50.0), MONDAY_8AM);
        assert!(matches!(
            materialize_transition_graph(&idx, &q, &CostParams::default(), &SearchOptions::default()),
            Err(SearchError::TooLarge { .. })
        ));
    }
}
