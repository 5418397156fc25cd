//! Geodesic primitives, the local metric projection used by the grid, and
//! calendar helpers.
//!
//! Coordinates are WGS84 degrees in `(lat, lon)` order everywhere inside the
//! crate. GeoJSON's `[lon, lat]` order only appears at the I/O boundary.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Mean Earth radius used by [`haversine_m`].
pub const EARTH_RADIUS_M: f64 = 6_371_000.0;

/// Meters per degree used by the local equirectangular projection.
pub const METERS_PER_DEGREE: f64 = 111_320.0;

pub const SECONDS_PER_DAY: i64 = 86_400;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeoError {
    #[error("invalid coordinate lat={lat}, lon={lon}")]
    InvalidCoordinate { lat: f64, lon: f64 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("point lat={lat}, lon={lon} is outside the grid")]
    OutOfBounds { lat: f64, lon: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoPoint {
    pub lat: f64,
    pub lon: f64,
}

impl GeoPoint {
    pub fn new(lat: f64, lon: f64) -> Result<Self, GeoError> {
        let p = Self { lat, lon };
        if p.is_valid() {
            Ok(p)
        } else {
            Err(GeoError::InvalidCoordinate { lat, lon })
        }
    }

    pub fn is_valid(&self) -> bool {
        self.lat.is_finite()
            && self.lon.is_finite()
            && (-90.0..=90.0).contains(&self.lat)
            && (-180.0..=180.0).contains(&self.lon)
    }

    /// Point displaced by the given metric offsets, using the local projection
    /// anchored at `self`.
    pub fn offset_m(&self, east_m: f64, north_m: f64) -> GeoPoint {
        LocalProjection::new(*self).unproject(east_m, north_m)
    }
}

/// Great-circle distance in meters.
pub fn haversine_m(a: GeoPoint, b: GeoPoint) -> f64 {
    let phi1 = a.lat.to_radians();
    let phi2 = b.lat.to_radians();
    let dphi = (b.lat - a.lat).to_radians();
    let dlambda = (b.lon - a.lon).to_radians();
    let h = (dphi / 2.0).sin().powi(2) + phi1.cos() * phi2.cos() * (dlambda / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_M * h.sqrt().min(1.0).asin()
}

/// Equirectangular projection anchored at a fixed origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalProjection {
    origin: GeoPoint,
    cos_lat: f64,
}

impl LocalProjection {
    pub fn new(origin: GeoPoint) -> Self {
        Self {
            origin,
            cos_lat: origin.lat.to_radians().cos(),
        }
    }

    pub fn origin(&self) -> GeoPoint {
        self.origin
    }

    /// `(east_m, north_m)` of `p` relative to the origin.
    pub fn project(&self, p: GeoPoint) -> (f64, f64) {
        let east = (p.lon - self.origin.lon) * self.cos_lat * METERS_PER_DEGREE;
        let north = (p.lat - self.origin.lat) * METERS_PER_DEGREE;
        (east, north)
    }

    pub fn unproject(&self, east_m: f64, north_m: f64) -> GeoPoint {
        GeoPoint {
            lat: self.origin.lat + north_m / METERS_PER_DEGREE,
            lon: self.origin.lon + east_m / (self.cos_lat * METERS_PER_DEGREE),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CellId {
    pub col: u32,
    pub row: u32,
}

impl CellId {
    pub fn new(col: u32, row: u32) -> Self {
        Self { col, row }
    }
}

/// Uniform square grid over the area of interest. `origin` is the south-west
/// corner; cells are half-open on their east and north edges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub origin: GeoPoint,
    pub cell_size_m: f64,
    pub cols: u32,
    pub rows: u32,
}

impl GridSpec {
    pub fn new(origin: GeoPoint, cell_size_m: f64, cols: u32, rows: u32) -> Result<Self, GeoError> {
        if !origin.is_valid() {
            return Err(GeoError::InvalidCoordinate {
                lat: origin.lat,
                lon: origin.lon,
            });
        }
        if !(cell_size_m.is_finite() && cell_size_m > 0.0) {
            return Err(GeoError::InvalidGrid(format!(
                "cell_size_m must be positive, got {cell_size_m}"
            )));
        }
        if cols == 0 || rows == 0 {
            return Err(GeoError::InvalidGrid(format!(
                "grid needs at least one column and row, got {cols}x{rows}"
            )));
        }
        Ok(Self {
            origin,
            cell_size_m,
            cols,
            rows,
        })
    }

    /// Smallest grid covering every point, padded by `pad_cells` on each side.
    pub fn covering<I>(points: I, cell_size_m: f64, pad_cells: u32) -> Result<Self, GeoError>
    where
        I: IntoIterator<Item = GeoPoint>,
    {
        let mut min_lat = f64::INFINITY;
        let mut min_lon = f64::INFINITY;
        let mut max_lat = f64::NEG_INFINITY;
        let mut max_lon = f64::NEG_INFINITY;
        for p in points {
            min_lat = min_lat.min(p.lat);
            min_lon = min_lon.min(p.lon);
            max_lat = max_lat.max(p.lat);
            max_lon = max_lon.max(p.lon);
        }
        if !min_lat.is_finite() {
            return Err(GeoError::InvalidGrid("no points to cover".into()));
        }
        if !(cell_size_m.is_finite() && cell_size_m > 0.0) {
            return Err(GeoError::InvalidGrid(format!(
                "cell_size_m must be positive, got {cell_size_m}"
            )));
        }
        let pad = pad_cells as f64 * cell_size_m;
        let corner = GeoPoint::new(min_lat, min_lon)?.offset_m(-pad, -pad);
        let origin = GeoPoint::new(corner.lat.max(-90.0), corner.lon.max(-180.0))?;
        let proj = LocalProjection::new(origin);
        let (east, north) = proj.project(GeoPoint {
            lat: max_lat,
            lon: max_lon,
        });
        let cols = (east / cell_size_m).floor() as u32 + 1 + pad_cells;
        let rows = (north / cell_size_m).floor() as u32 + 1 + pad_cells;
        Self::new(origin, cell_size_m, cols, rows)
    }

    pub fn projection(&self) -> LocalProjection {
        LocalProjection::new(self.origin)
    }

    pub fn contains(&self, p: GeoPoint) -> bool {
        self.cell_of(p).is_ok()
    }

    pub fn cell_of(&self, p: GeoPoint) -> Result<CellId, GeoError> {
        cell_of(p, self)
    }

    pub fn cell_count(&self) -> u64 {
        self.cols as u64 * self.rows as u64
    }
}

// Offsets within this many cell-widths of a boundary snap onto it, so that a
// point constructed exactly on an edge lands in the higher cell despite
// projection round-off.
const BOUNDARY_SNAP: f64 = 1e-9;

fn cell_index(offset_m: f64, cell_size_m: f64) -> f64 {
    let x = offset_m / cell_size_m;
    let nearest = x.round();
    if (x - nearest).abs() < BOUNDARY_SNAP {
        nearest
    } else {
        x.floor()
    }
}

pub fn cell_of(p: GeoPoint, spec: &GridSpec) -> Result<CellId, GeoError> {
    let out = || GeoError::OutOfBounds { lat: p.lat, lon: p.lon };
    if !p.is_valid() {
        return Err(out());
    }
    let (east, north) = spec.projection().project(p);
    let col = cell_index(east, spec.cell_size_m);
    let row = cell_index(north, spec.cell_size_m);
    if col < 0.0 || row < 0.0 || col >= spec.cols as f64 || row >= spec.rows as f64 {
        return Err(out());
    }
    Ok(CellId::new(col as u32, row as u32))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DayClass {
    Weekday,
    Weekend,
}

/// Weekday/weekend class of the UTC calendar day containing `ts`.
pub fn day_class(ts: i64) -> DayClass {
    // 1970-01-01 was a Thursday; 0 = Monday.
    let weekday = (ts.div_euclid(SECONDS_PER_DAY) + 3).rem_euclid(7);
    if weekday >= 5 {
        DayClass::Weekend
    } else {
        DayClass::Weekday
    }
}

/// Seconds since UTC midnight.
pub fn time_of_day(ts: i64) -> u32 {
    ts.rem_euclid(SECONDS_PER_DAY) as u32
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(lat: f64, lon: f64) -> GeoPoint {
        GeoPoint::new(lat, lon).unwrap()
    }

    // Spherical law of cosines, independent of the haversine formulation.
    fn cosine_law_m(a: GeoPoint, b: GeoPoint) -> f64 {
        let (p1, p2) = (a.lat.to_radians(), b.lat.to_radians());
        let dl = (b.lon - a.lon).to_radians();
        let c = (p1.sin() * p2.sin() + p1.cos() * p2.cos() * dl.cos()).clamp(-1.0, 1.0);
        EARTH_RADIUS_M * c.acos()
    }

    #[test]
    fn haversine_identity_is_zero() {
        assert_eq!(haversine_m(p(37.0, -122.0), p(37.0, -122.0)), 0.0);
    }

    #[test]
    fn haversine_one_degree_matches_cosine_law() {
        let east = haversine_m(p(0.0, 0.0), p(0.0, 1.0));
        let north = haversine_m(p(0.0, 0.0), p(1.0, 0.0));
        let oracle = cosine_law_m(p(0.0, 0.0), p(0.0, 1.0));
        assert!((oracle - 111_194.93).abs() < 0.01, "oracle {oracle}");
        assert!((east - oracle).abs() / oracle < 1e-9);
        assert!((north - oracle).abs() / oracle < 1e-9);
    }

    #[test]
    fn invalid_coordinates_rejected() {
        assert!(GeoPoint::new(91.0, 0.0).is_err());
        assert!(GeoPoint::new(0.0, -180.5).is_err());
        assert!(GeoPoint::new(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn cell_of_examples() {
        let origin = p(37.7, -122.5);
        let spec = GridSpec::new(origin, 100.0, 50, 50).unwrap();
        assert_eq!(cell_of(origin, &spec).unwrap(), CellId::new(0, 0));

        // Inverse of the projection formulas, written out independently.
        let cos = 37.7f64.to_radians().cos();
        let q = p(37.7 + 250.0 / 111_320.0, -122.5 + 150.0 / (cos * 111_320.0));
        assert_eq!(cell_of(q, &spec).unwrap(), CellId::new(1, 2));

        let edge = p(37.7, -122.5 + 100.0 / (cos * 111_320.0));
        assert_eq!(cell_of(edge, &spec).unwrap(), CellId::new(1, 0));
    }

    #[test]
    fn cell_of_out_of_bounds() {
        let spec = GridSpec::new(p(37.7, -122.5), 100.0, 2, 2).unwrap();
        assert!(matches!(
            cell_of(p(37.69, -122.5), &spec),
            Err(GeoError::OutOfBounds { .. })
        ));
        // East edge of the whole grid is exclusive.
        let east_edge = spec.origin.offset_m(200.0, 10.0);
        assert!(cell_of(east_edge, &spec).is_err());
    }

    #[test]
    fn grid_spec_validation() {
        assert!(GridSpec::new(p(0.0, 0.0), 0.0, 1, 1).is_err());
        assert!(GridSpec::new(p(0.0, 0.0), 10.0, 0, 1).is_err());
    }

    #[test]
    fn covering_contains_all_points() {
        let pts = [p(37.70, -122.50), p(37.80, -122.40), p(37.75, -122.45)];
        let spec = GridSpec::covering(pts, 100.0, 1).unwrap();
        for q in pts {
            assert!(spec.contains(q));
        }
        assert!(GridSpec::covering(std::iter::empty(), 100.0, 0).is_err());
    }

    #[test]
    fn day_class_calendar_facts() {
        // 2024-01-01 was a Monday; 2024-01-06 a Saturday.
        assert_eq!(day_class(1_704_110_400), DayClass::Weekday);
        assert_eq!(day_class(1_704_542_400), DayClass::Weekend);
        assert_eq!(day_class(1_704_628_800), DayClass::Weekend); // Sunday
        assert_eq!(day_class(0), DayClass::Weekday); // Thursday
    }

    #[test]
    fn time_of_day_wraps() {
        assert_eq!(time_of_day(86_400 + 61), 61);
        assert_eq!(time_of_day(0), 0);
    }

    fn city_point() -> impl Strategy<Value = GeoPoint> {
        (37.6f64..37.9, -122.6f64..-122.3).prop_map(|(lat, lon)| GeoPoint { lat, lon })
    }

    fn any_point() -> impl Strategy<Value = GeoPoint> {
        (-89.0f64..89.0, -179.0f64..179.0).prop_map(|(lat, lon)| GeoPoint { lat, lon })
    }

    proptest! {
        #[test]
        fn haversine_triangle_inequality(a in any_point(), b in any_point(), c in any_point()) {
            let ab = haversine_m(a, b);
            let bc = haversine_m(b, c);
            let ac = haversine_m(a, c);
            prop_assert!(ac <= (ab + bc) * (1.0 + 1e-6) + 1e-6);
            prop_assert!((ab - haversine_m(b, a)).abs() <= 1e-6 * ab.max(1.0));
            prop_assert!(ab >= 0.0);
        }

        #[test]
        fn day_class_weekly_period(ts in 0i64..4_000_000_000) {
            prop_assert_eq!(day_class(ts), day_class(ts + 7 * SECONDS_PER_DAY));
        }

        #[test]
        fn projection_error_within_one_percent(
            e1 in 0.0f64..50_000.0, n1 in 0.0f64..50_000.0,
            e2 in 0.0f64..50_000.0, n2 in 0.0f64..50_000.0,
        ) {
            let proj = LocalProjection::new(GeoPoint { lat: 37.6, lon: -122.6 });
            let a = proj.unproject(e1, n1);
            let b = proj.unproject(e2, n2);
            let euclid = ((e1 - e2).powi(2) + (n1 - n2).powi(2)).sqrt();
            prop_assume!(euclid > 1.0);
            let hav = haversine_m(a, b);
            prop_assert!((hav - euclid).abs() / hav < 0.01, "hav {} euclid {}", hav, euclid);
        }

        #[test]
        fn cell_of_partitions_box(q in city_point()) {
            let spec = GridSpec::new(GeoPoint { lat: 37.6, lon: -122.6 }, 100.0, 400, 400).unwrap();
            let cell = cell_of(q, &spec).unwrap();
            prop_assert!(cell.col < spec.cols && cell.row < spec.rows);
            // The cell's half-open box contains the point's projected offsets.
            let (e, n) = spec.projection().project(q);
            let lo_e = cell.col as f64 * 100.0;
            let lo_n = cell.row as f64 * 100.0;
            prop_assert!(e >= lo_e - 1e-6 && e < lo_e + 100.0 + 1e-6);
            prop_assert!(n >= lo_n - 1e-6 && n < lo_n + 100.0 + 1e-6);
        }
    }
}
