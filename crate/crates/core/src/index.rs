//! Unified grid index over trajectory and road points.
//!
//! Each occupied cell keeps its trajectory points in an ordered map keyed by
//! time of day, so temporal window lookups are range scans. Road points carry
//! no time and are stored as a plain list.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geo::{day_class, time_of_day, CellId, DayClass, GeoError, GeoPoint, GridSpec, SECONDS_PER_DAY};
use crate::ingest::{RoadNetwork, TrajectoryDb};

/// Snapshot file magic.
pub const SNAPSHOT_MAGIC: [u8; 8] = *b"TRJGRIDX";
pub const SNAPSHOT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum IndexError {
    #[error(transparent)]
    Geo(#[from] GeoError),
    #[error("invalid point reference {0:?}")]
    InvalidRef(PointRef),
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("bad snapshot: {0}")]
    Snapshot(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SourceKind {
    Trajectory,
    Road,
}

/// Handle to one point of one trajectory or road segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PointRef {
    pub kind: SourceKind,
    pub item: u32,
    pub point: u32,
}

impl PointRef {
    pub fn traj(item: usize, point: usize) -> Self {
        Self {
            kind: SourceKind::Trajectory,
            item: item as u32,
            point: point as u32,
        }
    }

    pub fn road(item: usize, point: usize) -> Self {
        Self {
            kind: SourceKind::Road,
            item: item as u32,
            point: point as u32,
        }
    }

    pub fn is_road(&self) -> bool {
        self.kind == SourceKind::Road
    }

    pub fn same_item(&self, other: &PointRef) -> bool {
        self.kind == other.kind && self.item == other.item
    }

    pub(crate) fn with_point(self, point: u32) -> Self {
        Self { point, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolvedPoint {
    pub pos: GeoPoint,
    /// `None` for road points.
    pub ts: Option<i64>,
    pub predecessor: Option<PointRef>,
    pub successor: Option<PointRef>,
}

pub fn resolve(db: &TrajectoryDb, net: &RoadNetwork, r: PointRef) -> Result<ResolvedPoint, IndexError> {
    let (pos, ts, len) = match r.kind {
        SourceKind::Trajectory => {
            let t = db.trajectories.get(r.item as usize).ok_or(IndexError::InvalidRef(r))?;
            let p = t.points.get(r.point as usize).ok_or(IndexError::InvalidRef(r))?;
            (p.pos, Some(p.ts), t.points.len())
        }
        SourceKind::Road => {
            let s = net.segments.get(r.item as usize).ok_or(IndexError::InvalidRef(r))?;
            let p = s.points.get(r.point as usize).ok_or(IndexError::InvalidRef(r))?;
            (*p, None, s.points.len())
        }
    };
    let predecessor = (r.point > 0).then(|| r.with_point(r.point - 1));
    let successor = ((r.point as usize) + 1 < len).then(|| r.with_point(r.point + 1));
    Ok(ResolvedPoint {
        pos,
        ts,
        predecessor,
        successor,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrajEntry {
    pub point: PointRef,
    pub day: DayClass,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridCell {
    /// Keyed by time-of-day seconds.
    pub traj_entries: BTreeMap<u32, Vec<TrajEntry>>,
    pub road_entries: Vec<PointRef>,
}

impl GridCell {
    pub fn traj_len(&self) -> usize {
        self.traj_entries.values().map(Vec::len).sum()
    }

    fn for_each_match(&self, filter: Option<&TemporalFilter>, mut f: impl FnMut(PointRef)) {
        match filter {
            None => self.traj_entries.values().flatten().for_each(|e| f(e.point)),
            Some(flt) => {
                for (lo, hi) in flt.tod_ranges() {
                    for entry in self.traj_entries.range(lo..=hi).flat_map(|(_, v)| v) {
                        if entry.day == flt.day {
                            f(entry.point);
                        }
                    }
                }
            }
        }
        self.road_entries.iter().copied().for_each(f);
    }
}

/// Time-of-day window around a departure, restricted to one day class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemporalFilter {
    pub query_tod: u32,
    pub window_s: u32,
    pub day: DayClass,
}

impl TemporalFilter {
    pub fn new(query_tod: u32, window_s: u32, day: DayClass) -> Self {
        debug_assert!((query_tod as i64) < SECONDS_PER_DAY);
        Self {
            query_tod,
            window_s,
            day,
        }
    }

    pub fn around(depart_ts: i64, window_s: f64) -> Self {
        let window = if window_s.is_finite() { window_s.max(0.0).round() } else { u32::MAX as f64 };
        Self::new(time_of_day(depart_ts), window.min(u32::MAX as f64) as u32, day_class(depart_ts))
    }

    /// Inclusive time-of-day ranges covered by the window, in ascending order.
    /// A window crossing midnight splits into two ranges.
    pub fn tod_ranges(&self) -> Vec<(u32, u32)> {
        let last = (SECONDS_PER_DAY - 1) as u32;
        if self.window_s as i64 * 2 >= SECONDS_PER_DAY {
            return vec![(0, last)];
        }
        let lo = self.query_tod as i64 - self.window_s as i64;
        let hi = self.query_tod as i64 + self.window_s as i64;
        if lo < 0 {
            vec![(0, hi as u32), ((lo + SECONDS_PER_DAY) as u32, last)]
        } else if hi >= SECONDS_PER_DAY {
            vec![(0, (hi - SECONDS_PER_DAY) as u32), (lo as u32, last)]
        } else {
            vec![(lo as u32, hi as u32)]
        }
    }

    /// Same predicate as the range lookup, evaluated on one entry.
    pub fn accepts(&self, tod: u32, day: DayClass) -> bool {
        if day != self.day {
            return false;
        }
        let diff = (tod as i64 - self.query_tod as i64).rem_euclid(SECONDS_PER_DAY);
        diff.min(SECONDS_PER_DAY - diff) <= self.window_s as i64
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexStats {
    pub cells_used: usize,
    pub traj_points: usize,
    pub road_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridIndex {
    spec: GridSpec,
    cells: BTreeMap<CellId, GridCell>,
    trajectories: TrajectoryDb,
    roads: RoadNetwork,
    stats: IndexStats,
}

impl GridIndex {
    /// Inserts every trajectory measurement into its cell's temporal map,
    /// then every road point into its cell's road list.
    pub fn build(trajectories: TrajectoryDb, roads: RoadNetwork, spec: GridSpec) -> Result<Self, IndexError> {
        let mut cells: BTreeMap<CellId, GridCell> = BTreeMap::new();
        for (i, traj) in trajectories.trajectories.iter().enumerate() {
            for (j, m) in traj.points.iter().enumerate() {
                let cell = spec.cell_of(m.pos)?;
                cells
                    .entry(cell)
                    .or_default()
                    .traj_entries
                    .entry(time_of_day(m.ts))
                    .or_default()
                    .push(TrajEntry {
                        point: PointRef::traj(i, j),
                        day: day_class(m.ts),
                    });
            }
        }
        for (i, seg) in roads.segments.iter().enumerate() {
            for (j, p) in seg.points.iter().enumerate() {
                let cell = spec.cell_of(*p)?;
                cells.entry(cell).or_default().road_entries.push(PointRef::road(i, j));
            }
        }
        let stats = IndexStats {
            cells_used: cells.len(),
            traj_points: trajectories.point_count(),
            road_points: roads.point_count(),
        };
        Ok(Self {
            spec,
            cells,
            trajectories,
            roads,
            stats,
        })
    }

    /// Builds over a grid computed from the data's bounding box, padded by one
    /// cell on each side.
    pub fn build_covering(trajectories: TrajectoryDb, roads: RoadNetwork, cell_size_m: f64) -> Result<Self, IndexError> {
        let spec = GridSpec::covering(trajectories.points().chain(roads.points()), cell_size_m, 1)?;
        Self::build(trajectories, roads, spec)
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn stats(&self) -> IndexStats {
        self.stats
    }

    pub fn trajectories(&self) -> &TrajectoryDb {
        &self.trajectories
    }

    pub fn roads(&self) -> &RoadNetwork {
        &self.roads
    }

    pub fn cell(&self, id: CellId) -> Option<&GridCell> {
        self.cells.get(&id)
    }

    pub fn cells(&self) -> impl Iterator<Item = (&CellId, &GridCell)> {
        self.cells.iter()
    }

    /// Trajectory refs passing `filter` (all of them when `None`), followed by
    /// every road ref in the cell. A missing cell yields nothing.
    pub fn query_cell(&self, cell: CellId, filter: Option<&TemporalFilter>) -> Vec<PointRef> {
        let mut out = Vec::new();
        self.for_each_in_cell(cell, filter, |r| out.push(r));
        out
    }

    pub(crate) fn for_each_in_cell(&self, cell: CellId, filter: Option<&TemporalFilter>, f: impl FnMut(PointRef)) {
        if let Some(c) = self.cells.get(&cell) {
            c.for_each_match(filter, f);
        }
    }

    pub fn resolve(&self, r: PointRef) -> Result<ResolvedPoint, IndexError> {
        resolve(&self.trajectories, &self.roads, r)
    }

    /// Position of a reference known to be valid.
    pub fn pos(&self, r: PointRef) -> GeoPoint {
        match r.kind {
            SourceKind::Trajectory => self.trajectories.trajectories[r.item as usize].points[r.point as usize].pos,
            SourceKind::Road => self.roads.segments[r.item as usize].points[r.point as usize],
        }
    }

    pub fn item_len(&self, r: PointRef) -> usize {
        match r.kind {
            SourceKind::Trajectory => self.trajectories.trajectories[r.item as usize].points.len(),
            SourceKind::Road => self.roads.segments[r.item as usize].points.len(),
        }
    }

    pub fn item_id(&self, r: PointRef) -> &str {
        match r.kind {
            SourceKind::Trajectory => &self.trajectories.trajectories[r.item as usize].id,
            SourceKind::Road => &self.roads.segments[r.item as usize].id,
        }
    }

    pub fn write_snapshot<W: Write>(&self, mut w: W) -> Result<(), IndexError> {
        let io = |source| IndexError::Io {
            path: PathBuf::from("<snapshot>"),
            source,
        };
        w.write_all(&SNAPSHOT_MAGIC).map_err(io)?;
        w.write_all(&SNAPSHOT_VERSION.to_le_bytes()).map_err(io)?;
        bincode::serialize_into(&mut w, self).map_err(|e| IndexError::Snapshot(e.to_string()))?;
        w.flush().map_err(io)
    }

    pub fn read_snapshot<R: Read>(mut r: R) -> Result<Self, IndexError> {
        let mut header = [0u8; 12];
        r.read_exact(&mut header)
            .map_err(|_| IndexError::Snapshot("truncated header".into()))?;
        if header[..8] != SNAPSHOT_MAGIC {
            return Err(IndexError::Snapshot("not an index snapshot".into()));
        }
        let version = u32::from_le_bytes(header[8..12].try_into().expect("4 bytes"));
        if version != SNAPSHOT_VERSION {
            return Err(IndexError::Snapshot(format!(
                "unsupported version {version}, expected {SNAPSHOT_VERSION}"
            )));
        }
        bincode::deserialize_from(r).map_err(|e| IndexError::Snapshot(e.to_string()))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), IndexError> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|source| IndexError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        self.write_snapshot(BufWriter::new(file))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, IndexError> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|source| IndexError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::read_snapshot(BufReader::new(file))
    }
}
