use std::collections::HashSet;

use proptest::prelude::*;
use trajgrid::cost::{cost_final, CostParams};
use trajgrid::eval::{oracle_route, read_queries, write_queries, QuerySet};
use trajgrid::geo::{haversine_m, DayClass, GeoPoint};
use trajgrid::index::{GridIndex, PointRef, TemporalFilter};
use trajgrid::ingest::{read_trajectories, write_trajectories, IngestError, Trajectory, TrajectoryDb, TrajectoryPoint};
use trajgrid::search::{find_path, RouteResult, SearchError, SearchOptions};
use trajgrid::synth::{lattice_fixture, MONDAY};

fn all_refs(idx: &GridIndex) -> Vec<PointRef> {
    let mut out = Vec::new();
    for (i, t) in idx.trajectories().trajectories.iter().enumerate() {
        out.extend((0..t.len()).map(|p| PointRef::traj(i, p)));
    }
    for (i, s) in idx.roads().segments.iter().enumerate() {
        out.extend((0..s.len()).map(|p| PointRef::road(i, p)));
    }
    out
}

fn circular_gap(a: u32, b: u32) -> u32 {
    let d = a.abs_diff(b);
    d.min(86_400 - d)
}

fn check_route(idx: &GridIndex, r: &RouteResult, origin: GeoPoint, dest: GeoPoint, params: &CostParams) {
    assert_eq!(r.path[0], origin);
    assert!(haversine_m(*r.path.last().unwrap(), dest) < params.d_thres);
    let mut eta = 0.0;
    let mut g = 0.0;
    for s in &r.steps {
        let again = cost_final(idx, &s.transition, params).unwrap();
        assert_eq!(again, s.cost);
        assert!(s.cost.search_s >= 0.0);
        eta += s.cost.base_s;
        g += s.cost.search_s;
    }
    assert_eq!(eta, r.eta_s);
    assert_eq!(g, r.search_cost_s);
    let legs: f64 = r.legs.iter().map(|l| l.base_s).sum();
    assert!((legs - r.eta_s).abs() <= 1e-9 * r.eta_s.max(1.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn every_point_is_indexed_once_in_its_own_cell(seed in 0u64..10_000) {
        let fx = lattice_fixture(seed);
        let idx = &fx.index;
        let mut seen = HashSet::new();
        for (&id, cell) in idx.cells() {
            for r in idx.query_cell(id, None) {
                prop_assert_eq!(idx.spec().cell_of(idx.pos(r)).unwrap(), id);
                prop_assert!(seen.insert(r), "{:?} listed twice", r);
            }
            prop_assert_eq!(cell.traj_len() + cell.road_entries.len(), idx.query_cell(id, None).len());
        }
        let expected: HashSet<PointRef> = all_refs(idx).into_iter().collect();
        prop_assert_eq!(seen, expected);
    }

    #[test]
    fn filtered_cell_query_matches_scan(seed in 0u64..10_000, tod in 0u32..86_400, w in 0u32..50_000, weekend in any::<bool>()) {
        let fx = lattice_fixture(seed);
        let idx = &fx.index;
        let day = if weekend { DayClass::Weekend } else { DayClass::Weekday };
        let filter = TemporalFilter::new(tod, w, day);
        for (&id, cell) in idx.cells() {
            let got: HashSet<PointRef> = idx.query_cell(id, Some(&filter)).into_iter().collect();
            let mut want: HashSet<PointRef> = cell.road_entries.iter().copied().collect();
            for (&t, entries) in &cell.traj_entries {
                for e in entries {
                    if e.day == day && circular_gap(t, tod) <= w {
                        want.insert(e.point);
                    }
                }
            }
            prop_assert_eq!(got, want);
        }
    }

    #[test]
    fn search_matches_oracle_and_costs_add_up(seed in 0u64..100_000, tau_c in 0.0f64..30.0, r_penalty in 0.0f64..4.0) {
        let mut fx = lattice_fixture(seed);
        fx.params.tau_c = tau_c;
        fx.params.r_penalty = r_penalty;
        let opts = SearchOptions::default();
        for q in &fx.queries.queries {
            let engine = find_path(&fx.index, q, &fx.params);
            let oracle = oracle_route(&fx.index, q, &fx.params, &opts).ok();
            match (&engine, &oracle) {
                (Ok(e), Some(o)) => {
                    prop_assert!((e.search_cost_s - o.search_cost_s).abs() <= 1e-9 * o.search_cost_s.max(1.0),
                        "engine {} oracle {}", e.search_cost_s, o.search_cost_s);
                    check_route(&fx.index, e, q.origin, q.dest, &fx.params);
                    prop_assert!(e.search_cost_s + 1e-9 >= e.eta_s);
                }
                (Err(SearchError::NoPath { .. }), None) => {}
                _ => prop_assert!(false, "engine {:?} vs oracle {:?}", engine.map(|r| r.search_cost_s), oracle.map(|r| r.search_cost_s)),
            }
        }
    }

    #[test]
    fn reward_never_beats_oracle(seed in 0u64..100_000, rw in 0.0f64..2.0) {
        let mut fx = lattice_fixture(seed);
        fx.params.rw = rw;
        for q in &fx.queries.queries {
            if let (Ok(e), Ok(o)) = (find_path(&fx.index, q, &fx.params), oracle_route(&fx.index, q, &fx.params, &SearchOptions::default())) {
                prop_assert!(e.search_cost_s + 1e-9 * o.search_cost_s.max(1.0) >= o.search_cost_s);
                check_route(&fx.index, &e, q.origin, q.dest, &fx.params);
            }
        }
    }

    #[test]
    fn search_is_deterministic(seed in 0u64..100_000) {
        let fx = lattice_fixture(seed);
        for q in &fx.queries.queries {
            prop_assert_eq!(find_path(&fx.index, q, &fx.params), find_path(&fx.index, q, &fx.params));
        }
    }

    #[test]
    fn snapshot_round_trip_preserves_routes(seed in 0u64..100_000) {
        let fx = lattice_fixture(seed);
        let mut buf = Vec::new();
        fx.index.write_snapshot(&mut buf).unwrap();
        let back = GridIndex::read_snapshot(buf.as_slice()).unwrap();
        prop_assert_eq!(&back, &fx.index);
        for q in &fx.queries.queries {
            prop_assert_eq!(find_path(&back, q, &fx.params), find_path(&fx.index, q, &fx.params));
        }
    }

    #[test]
    fn trajectory_csv_round_trip(
        trips in prop::collection::vec(
            prop::collection::vec((-60.0f64..60.0, -170.0f64..170.0, 0i64..600), 2..8),
            1..5,
        )
    ) {
        let trajectories: Vec<Trajectory> = trips
            .iter()
            .enumerate()
            .map(|(i, pts)| {
                let mut ts = MONDAY;
                let points = pts
                    .iter()
                    .map(|&(lat, lon, dt)| {
                        ts += dt;
                        TrajectoryPoint { pos: GeoPoint::new(lat, lon).unwrap(), ts }
                    })
                    .collect();
                Trajectory::new(format!("t{i}"), points).unwrap()
            })
            .collect();
        let db = TrajectoryDb::new(trajectories.clone()).unwrap();
        let mut buf = Vec::new();
        write_trajectories(&db, &mut buf).unwrap();
        let back = read_trajectories(buf.as_slice());
        let kept = TrajectoryDb::filtered(trajectories).unwrap();
        if kept.is_empty() {
            prop_assert!(matches!(back, Err(IngestError::EmptyDataset)));
        } else {
            let back = back.unwrap();
            prop_assert_eq!(back.dropped, kept.dropped);
            prop_assert_eq!(back.trajectories, kept.trajectories);
        }
    }

    #[test]
    fn query_csv_round_trip(seed in 0u64..10_000) {
        let fx = lattice_fixture(seed);
        let mut buf = Vec::new();
        write_queries(&fx.queries, &mut buf).unwrap();
        let back: QuerySet = read_queries(buf.as_slice(), "buf").unwrap();
        prop_assert_eq!(back.queries, fx.queries.queries);
    }
}
