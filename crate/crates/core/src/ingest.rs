//! Trajectory and road-network loading, validation, filtering, and spatial
//! coverage statistics.
//!
//! Trajectory CSV: header `traj_id,lat,lon,ts`, `ts` in integer epoch seconds
//! (UTC). Rows may appear in any order; they are grouped by id in order of
//! first appearance and sorted by timestamp within each group.
//!
//! Road GeoJSON: a `FeatureCollection` of `LineString` features with a string
//! `id` property and an optional numeric `speed_mps` property.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fs::File;
use std::io::{BufReader, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::geo::{haversine_m, CellId, GeoPoint, GridSpec};

/// Trips shorter than this are dropped at load time.
pub const MIN_TRIP_LENGTH_M: f64 = 500.0;
/// Trips lasting less than this are dropped at load time.
pub const MIN_TRIP_DURATION_S: i64 = 120;
/// Speed assigned to road features without `speed_mps` (about 30 mph).
pub const DEFAULT_ROAD_SPEED_MPS: f64 = 13.4;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("no trajectories survive filtering")]
    EmptyDataset,
    #[error("invalid geometry for {id}: {reason}")]
    InvalidGeometry { id: String, reason: String },
    #[error("invalid trajectory {id}: {reason}")]
    InvalidTrajectory { id: String, reason: String },
    #[error("duplicate id {0}")]
    DuplicateId(String),
    #[error("coverage target must lie in (0, 1], got {0}")]
    InvalidTarget(f64),
    #[error("coverage target {target} exceeds the achievable {achievable}")]
    Unreachable { target: f64, achievable: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub pos: GeoPoint,
    pub ts: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub id: String,
    pub points: Vec<TrajectoryPoint>,
}

impl Trajectory {
    /// Validates point count, coordinates, and timestamp order. Duplicate
    /// timestamps are allowed; decreasing ones are not.
    pub fn new(id: impl Into<String>, points: Vec<TrajectoryPoint>) -> Result<Self, IngestError> {
        let id = id.into();
        let bad = |reason: String| IngestError::InvalidTrajectory {
            id: id.clone(),
            reason,
        };
        if points.len() < 2 {
            return Err(bad(format!("needs at least 2 points, got {}", points.len())));
        }
        for (i, pt) in points.iter().enumerate() {
            if !pt.pos.is_valid() {
                return Err(bad(format!("point {i} has invalid coordinates")));
            }
            if pt.ts < 0 {
                return Err(bad(format!("point {i} has negative timestamp")));
            }
        }
        if let Some(i) = points.windows(2).position(|w| w[1].ts < w[0].ts) {
            return Err(bad(format!("timestamp decreases at point {}", i + 1)));
        }
        Ok(Self { id, points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn length_m(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| haversine_m(w[0].pos, w[1].pos))
            .sum()
    }

    pub fn duration_s(&self) -> i64 {
        match (self.points.first(), self.points.last()) {
            (Some(a), Some(b)) => b.ts - a.ts,
            _ => 0,
        }
    }

    /// The length/duration filter applied by [`load_trajectories`].
    pub fn passes_trip_filter(&self) -> bool {
        self.length_m() >= MIN_TRIP_LENGTH_M && self.duration_s() >= MIN_TRIP_DURATION_S
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoadSegment {
    pub id: String,
    pub points: Vec<GeoPoint>,
    pub speed_mps: f64,
}

impl RoadSegment {
    pub fn new(id: impl Into<String>, points: Vec<GeoPoint>, speed_mps: f64) -> Result<Self, IngestError> {
        let id = id.into();
        let bad = |reason: String| IngestError::InvalidGeometry {
            id: id.clone(),
            reason,
        };
        if points.len() < 2 {
            return Err(bad(format!("needs at least 2 points, got {}", points.len())));
        }
        if let Some(i) = points.iter().position(|p| !p.is_valid()) {
            return Err(bad(format!("point {i} has invalid coordinates")));
        }
        if let Some(i) = points.windows(2).position(|w| w[0] == w[1]) {
            return Err(bad(format!("points {i} and {} repeat", i + 1)));
        }
        if !(speed_mps.is_finite() && speed_mps > 0.0) {
            return Err(bad(format!("speed must be positive, got {speed_mps}")));
        }
        Ok(Self { id, points, speed_mps })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Historical trajectories. Positions in `trajectories` are the stable handles
/// used by point references.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryDb {
    pub trajectories: Vec<Trajectory>,
    /// Trajectories rejected by the trip filter while loading.
    pub dropped: usize,
}

impl TrajectoryDb {
    pub fn new(trajectories: Vec<Trajectory>) -> Result<Self, IngestError> {
        check_unique(trajectories.iter().map(|t| t.id.as_str()))?;
        Ok(Self {
            trajectories,
            dropped: 0,
        })
    }

    /// Keeps only trajectories passing the trip filter.
    pub fn filtered(trajectories: Vec<Trajectory>) -> Result<Self, IngestError> {
        let total = trajectories.len();
        let kept: Vec<_> = trajectories
            .into_iter()
            .filter(Trajectory::passes_trip_filter)
            .collect();
        let dropped = total - kept.len();
        let mut db = Self::new(kept)?;
        db.dropped = dropped;
        Ok(db)
    }

    pub fn len(&self) -> usize {
        self.trajectories.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trajectories.is_empty()
    }

    pub fn point_count(&self) -> usize {
        self.trajectories.iter().map(Trajectory::len).sum()
    }

    /// Trajectories at `indices`, in the given order.
    pub fn subset(&self, indices: &[usize]) -> TrajectoryDb {
        TrajectoryDb {
            trajectories: indices.iter().map(|&i| self.trajectories[i].clone()).collect(),
            dropped: 0,
        }
    }

    pub fn points(&self) -> impl Iterator<Item = GeoPoint> + '_ {
        self.trajectories
            .iter()
            .flat_map(|t| t.points.iter().map(|p| p.pos))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RoadNetwork {
    pub segments: Vec<RoadSegment>,
}

impl RoadNetwork {
    pub fn new(segments: Vec<RoadSegment>) -> Result<Self, IngestError> {
        check_unique(segments.iter().map(|s| s.id.as_str()))?;
        Ok(Self { segments })
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn point_count(&self) -> usize {
        self.segments.iter().map(RoadSegment::len).sum()
    }

    pub fn max_speed_mps(&self) -> Option<f64> {
        self.segments.iter().map(|s| s.speed_mps).reduce(f64::max)
    }

    pub fn points(&self) -> impl Iterator<Item = GeoPoint> + '_ {
        self.segments.iter().flat_map(|s| s.points.iter().copied())
    }
}

fn check_unique<'a>(ids: impl Iterator<Item = &'a str>) -> Result<(), IngestError> {
    let mut seen = HashSet::new();
    for id in ids {
        if !seen.insert(id) {
            return Err(IngestError::DuplicateId(id.to_string()));
        }
    }
    Ok(())
}

fn open(path: &Path) -> Result<BufReader<File>, IngestError> {
    File::open(path).map(BufReader::new).map_err(|source| IngestError::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[derive(Debug, Deserialize)]
struct TrajectoryRow {
    traj_id: String,
    lat: f64,
    lon: f64,
    ts: i64,
}

fn parse_err(e: csv::Error) -> IngestError {
    IngestError::Parse {
        line: e.position().map_or(0, |p| p.line()),
        message: e.to_string(),
    }
}

pub fn load_trajectories(path: impl AsRef<Path>) -> Result<TrajectoryDb, IngestError> {
    read_trajectories(open(path.as_ref())?)
}

/// Parses trajectory CSV from any reader; see [`load_trajectories`].
pub fn read_trajectories<R: Read>(reader: R) -> Result<TrajectoryDb, IngestError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let mut order: Vec<String> = Vec::new();
    let mut groups: HashMap<String, Vec<TrajectoryPoint>> = HashMap::new();

    let headers = rdr.headers().map_err(parse_err)?.clone();
    for record in rdr.records() {
        let record = record.map_err(parse_err)?;
        let line = record.position().map_or(0, |p| p.line());
        let row: TrajectoryRow = record.deserialize(Some(&headers)).map_err(|e| IngestError::Parse {
            line,
            message: e.to_string(),
        })?;
        let pos = GeoPoint::new(row.lat, row.lon).map_err(|e| IngestError::Parse {
            line,
            message: e.to_string(),
        })?;
        if row.ts < 0 {
            return Err(IngestError::Parse {
                line,
                message: format!("negative timestamp {}", row.ts),
            });
        }
        let group = groups.entry(row.traj_id.clone()).or_insert_with(|| {
            order.push(row.traj_id.clone());
            Vec::new()
        });
        group.push(TrajectoryPoint { pos, ts: row.ts });
    }

    let total = order.len();
    let mut kept = Vec::new();
    for id in order {
        let mut points = groups.remove(&id).unwrap_or_default();
        points.sort_by_key(|p| p.ts);
        if points.len() < 2 {
            continue;
        }
        let traj = Trajectory::new(id, points)?;
        if traj.passes_trip_filter() {
            kept.push(traj);
        }
    }
    if kept.is_empty() {
        return Err(IngestError::EmptyDataset);
    }
    let dropped = total - kept.len();
    let mut db = TrajectoryDb::new(kept)?;
    db.dropped = dropped;
    Ok(db)
}

pub fn write_trajectories<W: Write>(db: &TrajectoryDb, writer: W) -> csv::Result<()> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(["traj_id", "lat", "lon", "ts"])?;
    for t in &db.trajectories {
        for p in &t.points {
            wtr.write_record([
                t.id.clone(),
                p.pos.lat.to_string(),
                p.pos.lon.to_string(),
                p.ts.to_string(),
            ])?;
        }
    }
    wtr.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoadOptions {
    pub default_speed_mps: f64,
    /// Speeds above this are clamped so that straight-line travel at this
    /// speed never beats a road leg.
    pub max_speed_mps: f64,
}

impl Default for RoadOptions {
    fn default() -> Self {
        Self {
            default_speed_mps: DEFAULT_ROAD_SPEED_MPS,
            max_speed_mps: crate::cost::DEFAULT_V_MAX_MPS,
        }
    }
}

pub fn load_road_network(path: impl AsRef<Path>, opts: &RoadOptions) -> Result<RoadNetwork, IngestError> {
    read_road_network(open(path.as_ref())?, opts)
}

pub fn read_road_network<R: Read>(reader: R, opts: &RoadOptions) -> Result<RoadNetwork, IngestError> {
    let parse = |message: String| IngestError::Parse { line: 0, message };
    let doc: Value = serde_json::from_reader(reader).map_err(|e| IngestError::Parse {
        line: e.line() as u64,
        message: e.to_string(),
    })?;
    if doc.get("type").and_then(Value::as_str) != Some("FeatureCollection") {
        return Err(parse("expected a FeatureCollection".into()));
    }
    let features = doc
        .get("features")
        .and_then(Value::as_array)
        .ok_or_else(|| parse("missing features array".into()))?;

    let mut segments = Vec::with_capacity(features.len());
    for (i, feature) in features.iter().enumerate() {
        let geometry = feature.get("geometry").unwrap_or(&Value::Null);
        if geometry.get("type").and_then(Value::as_str) != Some("LineString") {
            continue;
        }
        let props = feature.get("properties").unwrap_or(&Value::Null);
        let id = match props.get("id") {
            Some(Value::String(s)) => s.clone(),
            Some(Value::Number(n)) => n.to_string(),
            _ => return Err(parse(format!("feature {i} has no string id"))),
        };
        let speed = match props.get("speed_mps") {
            None | Some(Value::Null) => opts.default_speed_mps,
            Some(v) => v
                .as_f64()
                .ok_or_else(|| parse(format!("feature {id}: speed_mps is not a number")))?,
        };
        let coords = geometry
            .get("coordinates")
            .and_then(Value::as_array)
            .ok_or_else(|| parse(format!("feature {id}: missing coordinates")))?;
        let mut points = Vec::with_capacity(coords.len());
        for c in coords {
            let pair = c.as_array().filter(|a| a.len() >= 2);
            let (lon, lat) = match pair.map(|a| (a[0].as_f64(), a[1].as_f64())) {
                Some((Some(lon), Some(lat))) => (lon, lat),
                _ => return Err(parse(format!("feature {id}: bad position {c}"))),
            };
            points.push(GeoPoint::new(lat, lon).map_err(|e| IngestError::InvalidGeometry {
                id: id.clone(),
                reason: e.to_string(),
            })?);
        }
        segments.push(RoadSegment::new(id, points, speed.min(opts.max_speed_mps))?);
    }
    RoadNetwork::new(segments)
}

pub fn write_road_network<W: Write>(net: &RoadNetwork, writer: W) -> serde_json::Result<()> {
    let features: Vec<Value> = net
        .segments
        .iter()
        .map(|s| {
            json!({
                "type": "Feature",
                "properties": { "id": s.id, "speed_mps": s.speed_mps },
                "geometry": {
                    "type": "LineString",
                    "coordinates": s.points.iter().map(|p| [p.lon, p.lat]).collect::<Vec<_>>(),
                },
            })
        })
        .collect();
    serde_json::to_writer(writer, &json!({ "type": "FeatureCollection", "features": features }))
}

/// Which road segments each trajectory touches, where "touches" means sharing
/// a grid cell with at least one of the segment's points.
struct CoverageMap {
    per_trajectory: Vec<BTreeSet<usize>>,
    total_segments: usize,
}

impl CoverageMap {
    fn new(db: &TrajectoryDb, net: &RoadNetwork, spec: &GridSpec) -> Self {
        let mut segments_by_cell: HashMap<CellId, Vec<usize>> = HashMap::new();
        for (si, seg) in net.segments.iter().enumerate() {
            for p in &seg.points {
                if let Ok(cell) = spec.cell_of(*p) {
                    let v = segments_by_cell.entry(cell).or_default();
                    if v.last() != Some(&si) {
                        v.push(si);
                    }
                }
            }
        }
        let per_trajectory = db
            .trajectories
            .iter()
            .map(|t| {
                let mut touched = BTreeSet::new();
                for p in &t.points {
                    if let Some(segs) = spec.cell_of(p.pos).ok().and_then(|c| segments_by_cell.get(&c)) {
                        touched.extend(segs.iter().copied());
                    }
                }
                touched
            })
            .collect();
        Self {
            per_trajectory,
            total_segments: net.len(),
        }
    }

    fn fraction(&self, covered: usize) -> f64 {
        if self.total_segments == 0 {
            0.0
        } else {
            covered as f64 / self.total_segments as f64
        }
    }
}

/// Fraction of road segments sharing a grid cell with some trajectory point.
pub fn spatial_coverage(db: &TrajectoryDb, net: &RoadNetwork, spec: &GridSpec) -> f64 {
    let map = CoverageMap::new(db, net, spec);
    let covered: HashSet<usize> = map.per_trajectory.iter().flatten().copied().collect();
    map.fraction(covered.len())
}

/// Adds trajectories in database order until coverage reaches `target`, then
/// appends every later trajectory that touches no segment outside the covered
/// set. Relative order is preserved.
pub fn coverage_subset(
    db: &TrajectoryDb,
    net: &RoadNetwork,
    spec: &GridSpec,
    target: f64,
) -> Result<TrajectoryDb, IngestError> {
    if !(target > 0.0 && target <= 1.0) {
        return Err(IngestError::InvalidTarget(target));
    }
    let map = CoverageMap::new(db, net, spec);
    let mut covered: HashSet<usize> = HashSet::new();
    let mut chosen = Vec::new();
    let mut prefix_end = None;
    for (i, touched) in map.per_trajectory.iter().enumerate() {
        covered.extend(touched.iter().copied());
        chosen.push(i);
        if map.fraction(covered.len()) >= target {
            prefix_end = Some(i + 1);
            break;
        }
    }
    let Some(prefix_end) = prefix_end else {
        return Err(IngestError::Unreachable {
            target,
            achievable: map.fraction(covered.len()),
        });
    };
    for (i, touched) in map.per_trajectory.iter().enumerate().skip(prefix_end) {
        if touched.iter().all(|s| covered.contains(s)) {
            chosen.push(i);
        }
    }
    Ok(db.subset(&chosen))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn origin() -> GeoPoint {
        GeoPoint::new(37.75, -122.45).unwrap()
    }

    /// Straight eastbound trip of `length_m` lasting `duration_s`.
    fn trip(id: &str, length_m: f64, duration_s: i64) -> Trajectory {
        let n = 5;
        let points = (0..n)
            .map(|i| {
                let f = i as f64 / (n - 1) as f64;
                TrajectoryPoint {
                    pos: origin().offset_m(f * length_m, 0.0),
                    ts: 1_000 + (f * duration_s as f64).round() as i64,
                }
            })
            .collect();
        Trajectory::new(id, points).unwrap()
    }

    fn csv_for(trips: &[Trajectory]) -> String {
        let mut buf = Vec::new();
        write_trajectories(&TrajectoryDb::new(trips.to_vec()).unwrap(), &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn trip_filter_thresholds() {
        assert!(!trip("a", 400.0, 300).passes_trip_filter());
        assert!(!trip("b", 600.0, 90).passes_trip_filter());
        assert!(trip("c", 600.0, 180).passes_trip_filter());
    }

    #[test]
    fn load_drops_short_trips() {
        let text = csv_for(&[trip("a", 400.0, 300), trip("b", 600.0, 90), trip("c", 600.0, 180)]);
        let db = read_trajectories(text.as_bytes()).unwrap();
        assert_eq!(db.len(), 1);
        assert_eq!(db.trajectories[0].id, "c");
        assert_eq!(db.dropped, 2);
        for t in &db.trajectories {
            assert!(t.length_m() >= MIN_TRIP_LENGTH_M && t.duration_s() >= MIN_TRIP_DURATION_S);
        }
    }

    #[test]
    fn load_sorts_unsorted_rows() {
        let text = csv_for(&[trip("x", 800.0, 200)]);
        let mut lines: Vec<&str> = text.lines().collect();
        let header = lines.remove(0);
        lines.reverse();
        let shuffled = format!("{header}\n{}\n", lines.join("\n"));
        let db = read_trajectories(shuffled.as_bytes()).unwrap();
        let sorted = read_trajectories(text.as_bytes()).unwrap();
        assert_eq!(db, sorted);
    }

    #[test]
    fn load_all_dropped_is_empty_dataset() {
        let text = csv_for(&[trip("a", 100.0, 300)]);
        assert!(matches!(read_trajectories(text.as_bytes()), Err(IngestError::EmptyDataset)));
    }

    #[test]
    fn malformed_row_reports_line() {
        let text = "traj_id,lat,lon,ts\na,37.7,-122.4,10\na,not-a-number,-122.4,20\n";
        match read_trajectories(text.as_bytes()) {
            Err(IngestError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn decreasing_timestamps_rejected_by_constructor() {
        let a = TrajectoryPoint { pos: origin(), ts: 10 };
        let b = TrajectoryPoint { pos: origin(), ts: 5 };
        assert!(Trajectory::new("t", vec![a, b]).is_err());
        // Equal timestamps are fine.
        assert!(Trajectory::new("t", vec![a, a]).is_ok());
    }

    fn road_json(features: &str) -> String {
        format!(r#"{{"type":"FeatureCollection","features":[{features}]}}"#)
    }

    #[test]
    fn road_feature_mapping() {
        let text = road_json(
            r#"{"type":"Feature","properties":{"id":"s1","speed_mps":20},
                "geometry":{"type":"LineString","coordinates":[[-122.45,37.75],[-122.44,37.75],[-122.43,37.75]]}},
               {"type":"Feature","properties":{"id":"s2"},
                "geometry":{"type":"LineString","coordinates":[[-122.45,37.75],[-122.45,37.76]]}}"#,
        );
        let net = read_road_network(text.as_bytes(), &RoadOptions::default()).unwrap();
        assert_eq!(net.len(), 2);
        assert_eq!(net.segments[0].speed_mps, 20.0);
        assert_eq!(net.segments[0].len(), 3);
        assert_eq!(net.segments[0].points[0], GeoPoint::new(37.75, -122.45).unwrap());
        assert_eq!(net.segments[1].speed_mps, DEFAULT_ROAD_SPEED_MPS);
    }

    #[test]
    fn road_speed_clamped_to_max() {
        let text = road_json(
            r#"{"type":"Feature","properties":{"id":"fast","speed_mps":50},
                "geometry":{"type":"LineString","coordinates":[[-122.45,37.75],[-122.44,37.75]]}}"#,
        );
        let net = read_road_network(text.as_bytes(), &RoadOptions::default()).unwrap();
        assert_eq!(net.segments[0].speed_mps, crate::cost::DEFAULT_V_MAX_MPS);
    }

    #[test]
    fn degenerate_road_geometry() {
        let one = road_json(
            r#"{"type":"Feature","properties":{"id":"s"},"geometry":{"type":"LineString","coordinates":[[-122.45,37.75]]}}"#,
        );
        assert!(matches!(
            read_road_network(one.as_bytes(), &RoadOptions::default()),
            Err(IngestError::InvalidGeometry { .. })
        ));
        let repeated = road_json(
            r#"{"type":"Feature","properties":{"id":"s"},"geometry":{"type":"LineString","coordinates":[[-122.45,37.75],[-122.45,37.75]]}}"#,
        );
        assert!(matches!(
            read_road_network(repeated.as_bytes(), &RoadOptions::default()),
            Err(IngestError::InvalidGeometry { .. })
        ));
    }

    #[test]
    fn duplicate_ids_rejected() {
        let a = trip("a", 600.0, 180);
        assert!(matches!(
            TrajectoryDb::new(vec![a.clone(), a]),
            Err(IngestError::DuplicateId(_))
        ));
    }

    // Ten east-west segments stacked 300 m apart; trips placed on some rows.
    fn stacked_fixture(rows_with_trips: &[usize]) -> (TrajectoryDb, RoadNetwork, GridSpec) {
        let segments = (0..10)
            .map(|r| {
                let n = r as f64 * 300.0 + 50.0;
                RoadSegment::new(
                    format!("s{r}"),
                    vec![origin().offset_m(50.0, n), origin().offset_m(950.0, n)],
                    10.0,
                )
                .unwrap()
            })
            .collect();
        let trips = rows_with_trips
            .iter()
            .map(|&r| {
                let n = r as f64 * 300.0 + 50.0;
                let pts = (0..10)
                    .map(|k| TrajectoryPoint {
                        pos: origin().offset_m(50.0 + k as f64 * 100.0, n),
                        ts: 100 + 10 * k as i64,
                    })
                    .collect();
                Trajectory::new(format!("t{r}"), pts).unwrap()
            })
            .collect();
        let spec = GridSpec::new(origin(), 100.0, 12, 32).unwrap();
        (TrajectoryDb::new(trips).unwrap(), RoadNetwork::new(segments).unwrap(), spec)
    }

    // Exhaustive recount: a segment is covered when any of its cells holds any
    // trajectory point.
    fn brute_coverage(db: &TrajectoryDb, net: &RoadNetwork, spec: &GridSpec) -> f64 {
        let traj_cells: Vec<CellId> = db.points().filter_map(|p| spec.cell_of(p).ok()).collect();
        let covered = net
            .segments
            .iter()
            .filter(|s| {
                s.points
                    .iter()
                    .filter_map(|p| spec.cell_of(*p).ok())
                    .any(|c| traj_cells.contains(&c))
            })
            .count();
        covered as f64 / net.len() as f64
    }

    #[test]
    fn coverage_fractions() {
        let (db, net, spec) = stacked_fixture(&[0, 2, 4, 6, 8]);
        assert_eq!(brute_coverage(&db, &net, &spec), 0.5);
        assert_eq!(spatial_coverage(&db, &net, &spec), 0.5);

        let (full, net, spec) = stacked_fixture(&(0..10).collect::<Vec<_>>());
        assert_eq!(spatial_coverage(&full, &net, &spec), 1.0);

        // A single trip far from every segment.
        let far = Trajectory::new(
            "far",
            vec![
                TrajectoryPoint { pos: origin().offset_m(1150.0, 150.0), ts: 0 },
                TrajectoryPoint { pos: origin().offset_m(1150.0, 3050.0), ts: 300 },
            ],
        )
        .unwrap();
        let lone = TrajectoryDb::new(vec![far]).unwrap();
        assert_eq!(spatial_coverage(&lone, &net, &spec), 0.0);
    }

    #[test]
    fn coverage_subset_behaviour() {
        let (db, net, spec) = stacked_fixture(&[0, 2, 4, 6, 8]);
        let full = spatial_coverage(&db, &net, &spec);
        assert_eq!(coverage_subset(&db, &net, &spec, full).unwrap(), db);

        let small = coverage_subset(&db, &net, &spec, 0.05).unwrap();
        assert_eq!(small.len(), 1);
        assert!(spatial_coverage(&small, &net, &spec) >= 0.05);

        assert!(matches!(
            coverage_subset(&db, &net, &spec, 0.9),
            Err(IngestError::Unreachable { .. })
        ));
        assert!(matches!(
            coverage_subset(&db, &net, &spec, 0.0),
            Err(IngestError::InvalidTarget(_))
        ));
    }

    #[test]
    fn coverage_subset_includes_overlapping_trips() {
        let (mut db, net, spec) = stacked_fixture(&[0, 2, 4]);
        // A later duplicate of row 0 adds nothing new and must be kept.
        let mut dup = db.trajectories[0].clone();
        dup.id = "dup".into();
        db.trajectories.push(dup);
        let subset = coverage_subset(&db, &net, &spec, 0.1).unwrap();
        let ids: Vec<&str> = subset.trajectories.iter().map(|t| t.id.as_str()).collect();
        assert_eq!(ids, ["t0", "dup"]);
    }

    #[test]
    fn coverage_subset_prefix_monotone() {
        let (db, net, spec) = stacked_fixture(&[0, 2, 4, 6, 8]);
        let levels = [0.05, 0.1, 0.2, 0.3, 0.4, 0.5];
        let sets: Vec<Vec<String>> = levels
            .iter()
            .map(|&t| {
                let s = coverage_subset(&db, &net, &spec, t).unwrap();
                assert!(spatial_coverage(&s, &net, &spec) >= t);
                s.trajectories.into_iter().map(|t| t.id).collect()
            })
            .collect();
        for w in sets.windows(2) {
            assert!(w[0].iter().all(|id| w[1].contains(id)));
        }
    }
}
