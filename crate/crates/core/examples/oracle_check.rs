//! Compares the heuristic search against exhaustive Dijkstra on the
//! materialized transition graph of random small instances.

use trajgrid::eval::oracle_route;
use trajgrid::search::{find_path, materialize_transition_graph, SearchOptions};
use trajgrid::synth::lattice_fixture;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let opts = SearchOptions::default();
    let (mut agree, mut unreachable, mut differ) = (0, 0, 0);
    for seed in 0..50 {
        let fx = lattice_fixture(seed);
        for q in &fx.queries.queries {
            let graph = materialize_transition_graph(&fx.index, q, &fx.params, &opts)?;
            let engine = find_path(&fx.index, q, &fx.params).ok();
            let oracle = oracle_route(&fx.index, q, &fx.params, &opts).ok();
            match (engine, oracle) {
                (None, None) => unreachable += 1,
                (Some(e), Some(o)) if (e.search_cost_s - o.search_cost_s).abs() <= 1e-9 * o.search_cost_s.max(1.0) => agree += 1,
                (e, o) => {
                    differ += 1;
                    println!(
                        "seed {seed}: engine {:?} oracle {:?} ({} edges)",
                        e.map(|r| r.search_cost_s),
                        o.map(|r| r.search_cost_s),
                        graph.edge_count()
                    );
                }
            }
        }
    }
    println!("{agree} equal costs, {unreachable} unreachable on both sides, {differ} differ");
    Ok(())
}
