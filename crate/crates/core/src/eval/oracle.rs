use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::EvalError;
use crate::cost::CostParams;
use crate::index::GridIndex;
use crate::search::{
    materialize_transition_graph, Query, RouteResult, RouteStep, SearchOptions, SearchStats, TransitionGraph,
};

/// Cheapest path found by [`dijkstra_oracle`], as node indices into the graph
/// together with the edges taken.
#[derive(Debug, Clone, PartialEq)]
pub struct OraclePath {
    pub cost: f64,
    pub base_cost: f64,
    pub nodes: Vec<usize>,
    pub steps: Vec<RouteStep>,
    pub settled: usize,
}

#[derive(Clone, Copy, PartialEq)]
struct Entry {
    g: f64,
    seq: u64,
    slot: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        // f equals g without a heuristic, so the A* ordering reduces to this.
        other.g.total_cmp(&self.g).then_with(|| other.seq.cmp(&self.seq))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Uniform-cost search over a materialized graph on search costs, stopping at
/// the first settled target.
pub fn dijkstra_oracle(graph: &TransitionGraph, source: usize, targets: &[usize]) -> Result<OraclePath, EvalError> {
    let n = graph.nodes.len();
    let mut is_target = vec![false; n];
    for &t in targets {
        is_target[t] = true;
    }
    // Arena of (node, parent slot, edge index in parent, g, g_base).
    let mut arena: Vec<(usize, Option<usize>, usize, f64, f64)> = vec![(source, None, 0, 0.0, 0.0)];
    let mut best = vec![f64::INFINITY; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    let mut seq = 0;
    best[source] = 0.0;
    heap.push(Entry { g: 0.0, seq, slot: 0 });
    let mut settled = 0;

    while let Some(Entry { slot, .. }) = heap.pop() {
        let (u, _, _, g, g_base) = arena[slot];
        if done[u] {
            continue;
        }
        if is_target[u] {
            let mut nodes = Vec::new();
            let mut steps = Vec::new();
            let mut cur = Some(slot);
            while let Some(s) = cur {
                let (v, parent, edge, _, _) = arena[s];
                nodes.push(v);
                if let Some(p) = parent {
                    let e = &graph.edges[arena[p].0][edge];
                    steps.push(RouteStep {
                        transition: e.transition,
                        cost: e.cost,
                    });
                }
                cur = parent;
            }
            nodes.reverse();
            steps.reverse();
            return Ok(OraclePath {
                cost: g,
                base_cost: g_base,
                nodes,
                steps,
                settled,
            });
        }
        done[u] = true;
        settled += 1;
        for (k, e) in graph.edges[u].iter().enumerate() {
            if done[e.to] {
                continue;
            }
            let ng = g + e.cost.search_s;
            if ng >= best[e.to] {
                continue;
            }
            best[e.to] = ng;
            arena.push((e.to, Some(slot), k, ng, g_base + e.cost.base_s));
            seq += 1;
            heap.push(Entry {
                g: ng,
                seq,
                slot: arena.len() - 1,
            });
        }
    }
    Err(EvalError::NoPath)
}

/// Exact route for one query: materializes its transition graph and runs the
/// oracle from the origin.
pub fn oracle_route(
    idx: &GridIndex,
    q: &Query,
    params: &CostParams,
    opts: &SearchOptions,
) -> Result<RouteResult, EvalError> {
    if q.origin == q.dest {
        return Ok(RouteResult::trivial(q.origin, 0));
    }
    let graph = materialize_transition_graph(idx, q, params, opts)?;
    let found = dijkstra_oracle(&graph, TransitionGraph::SOURCE, &graph.targets)?;
    let stats = SearchStats {
        expansions: found.settled,
        ..Default::default()
    };
    let mut route = RouteResult::assemble(idx, q.origin, found.steps, stats);
    route.eta_s = found.base_cost;
    route.search_cost_s = found.cost;
    Ok(route)
}
