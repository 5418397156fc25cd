//! Synthetic datasets with known structure, for tests, examples, and
//! benchmarks.
//!
//! Most fixtures live on a square lattice whose nodes sit at grid cell
//! centres, so co-located points always share a cell and the straight-line
//! heuristic stays a lower bound on every move.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cost::CostParams;
use crate::eval::QuerySet;
use crate::geo::{GeoPoint, GridSpec, SECONDS_PER_DAY};
use crate::index::GridIndex;
use crate::ingest::{RoadNetwork, RoadSegment, Trajectory, TrajectoryDb, TrajectoryPoint, DEFAULT_ROAD_SPEED_MPS};
use crate::search::Query;

/// 2024-01-01 00:00 UTC, a Monday.
pub const MONDAY: i64 = 1_704_067_200;

pub fn hour(h: f64) -> i64 {
    MONDAY + (h * 3_600.0).round() as i64
}

/// Square lattice of `cols x rows` nodes spaced one cell apart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lattice {
    pub spec: GridSpec,
}

impl Lattice {
    pub fn new(cols: u32, rows: u32, cell_size_m: f64) -> Self {
        let origin = GeoPoint::new(37.70, -122.50).expect("constant origin");
        Self {
            spec: GridSpec::new(origin, cell_size_m, cols, rows).expect("valid lattice"),
        }
    }

    pub fn cols(&self) -> u32 {
        self.spec.cols
    }

    pub fn rows(&self) -> u32 {
        self.spec.rows
    }

    /// Centre of cell `(col, row)`.
    pub fn at(&self, col: u32, row: u32) -> GeoPoint {
        let s = self.spec.cell_size_m;
        self.spec
            .origin
            .offset_m((col as f64 + 0.5) * s, (row as f64 + 0.5) * s)
    }

    /// Trajectory through the given nodes, starting at `start_ts` and taking
    /// `step_s` per hop.
    pub fn trip(&self, id: impl Into<String>, nodes: &[(u32, u32)], start_ts: i64, step_s: i64) -> Trajectory {
        let points = nodes
            .iter()
            .enumerate()
            .map(|(i, &(c, r))| TrajectoryPoint {
                pos: self.at(c, r),
                ts: start_ts + i as i64 * step_s,
            })
            .collect();
        Trajectory::new(id, points).expect("lattice trip is well formed")
    }

    pub fn road(&self, id: impl Into<String>, nodes: &[(u32, u32)], speed_mps: f64) -> RoadSegment {
        RoadSegment::new(id, nodes.iter().map(|&(c, r)| self.at(c, r)).collect(), speed_mps)
            .expect("lattice road is well formed")
    }

    pub fn row_nodes(&self, row: u32, from_col: u32, to_col: u32) -> Vec<(u32, u32)> {
        span(from_col, to_col).map(|c| (c, row)).collect()
    }

    pub fn col_nodes(&self, col: u32, from_row: u32, to_row: u32) -> Vec<(u32, u32)> {
        span(from_row, to_row).map(|r| (col, r)).collect()
    }
}

fn span(a: u32, b: u32) -> Box<dyn Iterator<Item = u32>> {
    if a <= b {
        Box::new(a..=b)
    } else {
        Box::new((b..=a).rev())
    }
}

/// A ready-to-route index with its queries and parameters.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub index: GridIndex,
    pub queries: QuerySet,
    pub params: CostParams,
}

/// The raw parts of a fixture, for callers that rebuild indexes themselves.
#[derive(Debug, Clone)]
pub struct RawFixture {
    pub trajectories: TrajectoryDb,
    pub roads: RoadNetwork,
    pub spec: GridSpec,
    pub queries: QuerySet,
    pub params: CostParams,
}

impl RawFixture {
    pub fn build(&self) -> GridIndex {
        GridIndex::build(self.trajectories.clone(), self.roads.clone(), self.spec).expect("fixture fits its grid")
    }
}

fn random_walk(rng: &mut ChaCha8Rng, cols: u32, rows: u32, len: usize) -> Vec<(u32, u32)> {
    let mut c = rng.gen_range(0..cols);
    let mut r = rng.gen_range(0..rows);
    let mut out = vec![(c, r)];
    while out.len() < len {
        let moves: Vec<(u32, u32)> = [(1i64, 0i64), (-1, 0), (0, 1), (0, -1)]
            .iter()
            .map(|&(dc, dr)| (c as i64 + dc, r as i64 + dr))
            .filter(|&(x, y)| (0..cols as i64).contains(&x) && (0..rows as i64).contains(&y))
            .map(|(x, y)| (x as u32, y as u32))
            .collect();
        (c, r) = *moves.choose(rng).expect("lattice has at least two nodes");
        out.push((c, r));
    }
    out
}

/// Random small instance for checking search against the exact oracle.
///
/// Trajectories and roads are random lattice walks, recorded no faster than
/// the heuristic speed bound. Origins sit on recorded points, destinations on
/// lattice nodes, and `d_thres` is half a cell so only the destination node
/// itself terminates a search.
pub fn lattice_fixture(seed: u64) -> Fixture {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lat = Lattice::new(rng.gen_range(6..=14), rng.gen_range(6..=14), 100.0);
    let (cols, rows) = (lat.cols(), lat.rows());

    let base = hour(rng.gen_range(6.0..20.0));
    let n_traj = rng.gen_range(4..=14);
    let trajectories: Vec<Trajectory> = (0..n_traj)
        .map(|i| {
            let len = rng.gen_range(4..=40);
            let nodes = random_walk(&mut rng, cols, rows, len);
            let start = base + rng.gen_range(-2_400..=2_400);
            let points = nodes
                .iter()
                .scan(start, |ts, &(c, r)| {
                    let p = TrajectoryPoint { pos: lat.at(c, r), ts: *ts };
                    *ts += rng.gen_range(4..=25);
                    Some(p)
                })
                .collect();
            Trajectory::new(format!("t{i}"), points).expect("walk is well formed")
        })
        .collect();
    let n_road = rng.gen_range(0..=6);
    let roads: Vec<RoadSegment> = (0..n_road)
        .map(|i| {
            let len = rng.gen_range(2..=15);
            let nodes = random_walk(&mut rng, cols, rows, len);
            let speed = rng.gen_range(5.0..30.0);
            lat.road(format!("r{i}"), &nodes, speed)
        })
        .collect();

    let params = CostParams {
        tau_c: *[0.0, 5.0].choose(&mut rng).unwrap(),
        r_penalty: *[0.0, 1.0, 3.0].choose(&mut rng).unwrap(),
        rw: 0.0,
        d_thres: 50.0,
        ..CostParams::default()
    };

    let mut queries = Vec::new();
    for _ in 0..4 {
        let t = &trajectories[rng.gen_range(0..trajectories.len())];
        let oi = rng.gen_range(0..t.points.len());
        let o = t.points[oi];
        let dest = match rng.gen_range(0..10) {
            0..=3 => t.points[rng.gen_range(oi..t.points.len())].pos,
            4..=7 => {
                let u = &trajectories[rng.gen_range(0..trajectories.len())];
                u.points[rng.gen_range(0..u.points.len())].pos
            }
            _ => lat.at(rng.gen_range(0..cols), rng.gen_range(0..rows)),
        };
        queries.push(Query::new(o.pos, dest, o.ts + rng.gen_range(-600..=600)));
    }

    Fixture {
        index: GridIndex::build(
            TrajectoryDb::new(trajectories).expect("unique ids"),
            RoadNetwork::new(roads).expect("unique ids"),
            lat.spec,
        )
        .expect("walks stay on the lattice"),
        queries: QuerySet::new(queries, format!("lattice fixture, seed {seed}")),
        params,
    }
}

/// Two trips that cross once. The only way from the start of `east` to the
/// end of `north` is to hop at the crossing.
pub fn hop_fixture() -> Fixture {
    let lat = Lattice::new(8, 8, 100.0);
    let east = lat.trip("east", &lat.row_nodes(3, 0, 7), hour(8.0), 12);
    let north = lat.trip("north", &lat.col_nodes(4, 0, 7), hour(8.0) + 20, 12);
    let q = Query::new(lat.at(0, 3), lat.at(4, 7), hour(8.0));
    Fixture {
        index: GridIndex::build(
            TrajectoryDb::new(vec![east, north]).unwrap(),
            RoadNetwork::default(),
            lat.spec,
        )
        .unwrap(),
        queries: QuerySet::new(vec![q], "hop fixture"),
        params: CostParams::default(),
    }
}

/// A 1.5 km trip recorded at 10 m/s alongside a road of the same geometry
/// posted at 20 m/s. Without a road penalty the road is faster; at
/// `r_penalty = 3` its search cost is twice the trip's.
pub fn flip_fixture() -> Fixture {
    let lat = Lattice::new(18, 3, 100.0);
    let nodes = lat.row_nodes(1, 1, 16);
    let trip = lat.trip("trip", &nodes, hour(9.0), 10);
    let road = lat.road("road", &nodes, 20.0);
    let queries = [(1, 16), (2, 15), (1, 12), (4, 16)]
        .iter()
        .map(|&(a, b)| Query::new(lat.at(a, 1), lat.at(b, 1), hour(9.0) + 10 * (a as i64 - 1)))
        .collect();
    Fixture {
        index: GridIndex::build(
            TrajectoryDb::new(vec![trip]).unwrap(),
            RoadNetwork::new(vec![road]).unwrap(),
            lat.spec,
        )
        .unwrap(),
        queries: QuerySet::new(queries, "flip fixture"),
        params: CostParams::default(),
    }
}

fn two_way_lines(lat: &Lattice, speed: f64) -> Vec<RoadSegment> {
    let (cols, rows) = (lat.cols(), lat.rows());
    let mut roads = Vec::new();
    for r in 0..rows {
        roads.push(lat.road(format!("row{r}e"), &lat.row_nodes(r, 0, cols - 1), speed));
        roads.push(lat.road(format!("row{r}w"), &lat.row_nodes(r, cols - 1, 0), speed));
    }
    for c in 0..cols {
        roads.push(lat.road(format!("col{c}n"), &lat.col_nodes(c, 0, rows - 1), speed));
        roads.push(lat.road(format!("col{c}s"), &lat.col_nodes(c, rows - 1, 0), speed));
    }
    roads
}

/// Column `c` of [`window_city`] is recorded this many hours after the rows.
pub fn window_city_column_offset_h(c: u32) -> f64 {
    1.0 + c as f64 * 0.9
}

/// A 12 x 12 city where every street has recorded trips in both directions
/// and a road underneath. East-west trips run at 02:00; north-south trips on
/// column `c` run [`window_city_column_offset_h`] hours later. Every query
/// departs along a row and must turn onto a column, so narrow windows force
/// road fallback while a full-day window never needs it.
pub fn window_city(query_count: usize, seed: u64) -> Fixture {
    let lat = Lattice::new(12, 12, 100.0);
    let (cols, rows) = (lat.cols(), lat.rows());
    let step = 12;
    let row_start = hour(2.0);
    let mut trips = Vec::new();
    for r in 0..rows {
        trips.push(lat.trip(format!("r{r}e"), &lat.row_nodes(r, 0, cols - 1), row_start, step));
        trips.push(lat.trip(format!("r{r}w"), &lat.row_nodes(r, cols - 1, 0), row_start, step));
    }
    for c in 0..cols {
        let t0 = hour(2.0 + window_city_column_offset_h(c));
        trips.push(lat.trip(format!("c{c}n"), &lat.col_nodes(c, 0, rows - 1), t0, step));
        trips.push(lat.trip(format!("c{c}s"), &lat.col_nodes(c, rows - 1, 0), t0, step));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut queries = Vec::with_capacity(query_count);
    while queries.len() < query_count {
        let (r0, r1) = (rng.gen_range(0..rows), rng.gen_range(0..rows));
        let (c0, c1) = (rng.gen_range(0..cols), rng.gen_range(0..cols));
        if r0.abs_diff(r1) < 2 || c0 == c1 {
            continue;
        }
        // Departure matches the eastbound or westbound trip passing the origin.
        let along = if c1 > c0 { c0 } else { cols - 1 - c0 };
        let depart = row_start + along as i64 * step;
        queries.push(Query::new(lat.at(c0, r0), lat.at(c1, r1), depart));
    }

    Fixture {
        index: GridIndex::build(
            TrajectoryDb::new(trips).unwrap(),
            RoadNetwork::new(two_way_lines(&lat, DEFAULT_ROAD_SPEED_MPS)).unwrap(),
            lat.spec,
        )
        .unwrap(),
        queries: QuerySet::new(queries, format!("window city, seed {seed}")),
        params: CostParams {
            r_penalty: 3.0,
            ..CostParams::default()
        },
    }
}

/// A 14 x 7 city whose roads are split into one-block segments. Trips cover
/// the western half first and the eastern half second, so a coverage subset
/// near one half keeps only western trips. Queries are spread over both
/// halves.
pub fn disjoint_halves(query_count: usize, seed: u64) -> RawFixture {
    let lat = Lattice::new(14, 7, 100.0);
    let (cols, rows) = (lat.cols(), lat.rows());
    let half = cols / 2;
    let step = 24;
    let start = hour(8.0);
    let mut trips = Vec::new();
    for (name, lo, hi) in [("w", 0, half - 1), ("e", half, cols - 1)] {
        for r in 0..rows {
            trips.push(lat.trip(format!("{name}r{r}e"), &lat.row_nodes(r, lo, hi), start, step));
            trips.push(lat.trip(format!("{name}r{r}w"), &lat.row_nodes(r, hi, lo), start, step));
        }
        for c in lo..=hi {
            trips.push(lat.trip(format!("{name}c{c}n"), &lat.col_nodes(c, 0, rows - 1), start, step));
            trips.push(lat.trip(format!("{name}c{c}s"), &lat.col_nodes(c, rows - 1, 0), start, step));
        }
    }

    let mut roads = Vec::new();
    for r in 0..rows {
        for c in 0..cols - 1 {
            roads.push(lat.road(format!("h{c}_{r}e"), &[(c, r), (c + 1, r)], DEFAULT_ROAD_SPEED_MPS));
            roads.push(lat.road(format!("h{c}_{r}w"), &[(c + 1, r), (c, r)], DEFAULT_ROAD_SPEED_MPS));
        }
    }
    for c in 0..cols {
        for r in 0..rows - 1 {
            roads.push(lat.road(format!("v{c}_{r}n"), &[(c, r), (c, r + 1)], DEFAULT_ROAD_SPEED_MPS));
            roads.push(lat.road(format!("v{c}_{r}s"), &[(c, r + 1), (c, r)], DEFAULT_ROAD_SPEED_MPS));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut queries = Vec::with_capacity(query_count);
    while queries.len() < query_count {
        // Stay within one half so a route never needs to cross the seam.
        let (lo, hi) = if queries.len() % 2 == 0 { (0, half - 1) } else { (half, cols - 1) };
        let (c0, c1) = (rng.gen_range(lo..=hi), rng.gen_range(lo..=hi));
        let (r0, r1) = (rng.gen_range(0..rows), rng.gen_range(0..rows));
        if c0.abs_diff(c1) + r0.abs_diff(r1) < 3 {
            continue;
        }
        queries.push(Query::new(lat.at(c0, r0), lat.at(c1, r1), start));
    }

    RawFixture {
        trajectories: TrajectoryDb::new(trips).unwrap(),
        roads: RoadNetwork::new(roads).unwrap(),
        spec: lat.spec,
        queries: QuerySet::new(queries, format!("disjoint halves, seed {seed}")),
        params: CostParams {
            r_penalty: 3.0,
            ..CostParams::default()
        },
    }
}

/// Random-walk trips over a square city sized for roughly `target_points`
/// recorded points, with two-way arterial roads every tenth street. Start
/// times spread over a whole weekday.
pub fn large_city(target_points: usize, seed: u64) -> RawFixture {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let trip_len = 400usize;
    let n_trips = target_points.div_ceil(trip_len).max(1);
    // About 25 points per cell on average.
    let side = (((target_points / 25).max(100)) as f64).sqrt().ceil() as u32;
    let lat = Lattice::new(side, side, 100.0);
    let s = lat.spec.cell_size_m;

    let trips = (0..n_trips)
        .map(|i| {
            let nodes = random_walk(&mut rng, side, side, trip_len);
            let start = MONDAY + rng.gen_range(0..SECONDS_PER_DAY - 2 * 3_600);
            let points = nodes
                .iter()
                .scan(start, |ts, &(c, r)| {
                    let jitter_e = rng.gen_range(-0.3..0.3) * s;
                    let jitter_n = rng.gen_range(-0.3..0.3) * s;
                    let p = TrajectoryPoint {
                        pos: lat.at(c, r).offset_m(jitter_e, jitter_n),
                        ts: *ts,
                    };
                    *ts += rng.gen_range(8..=16);
                    Some(p)
                })
                .collect();
            Trajectory::new(format!("t{i}"), points).expect("walk is well formed")
        })
        .collect();

    let mut roads = Vec::new();
    for k in (0..side).step_by(10) {
        roads.push(lat.road(format!("row{k}e"), &lat.row_nodes(k, 0, side - 1), DEFAULT_ROAD_SPEED_MPS));
        roads.push(lat.road(format!("row{k}w"), &lat.row_nodes(k, side - 1, 0), DEFAULT_ROAD_SPEED_MPS));
        roads.push(lat.road(format!("col{k}n"), &lat.col_nodes(k, 0, side - 1), DEFAULT_ROAD_SPEED_MPS));
        roads.push(lat.road(format!("col{k}s"), &lat.col_nodes(k, side - 1, 0), DEFAULT_ROAD_SPEED_MPS));
    }

    let trajectories = TrajectoryDb::new(trips).unwrap();
    let queries = crate::eval::generate_queries(&trajectories, 20, seed, CostParams::default().d_thres)
        .expect("long walks yield separated pairs");
    RawFixture {
        trajectories,
        roads: RoadNetwork::new(roads).unwrap(),
        spec: lat.spec,
        queries,
        params: CostParams::default(),
    }
}
