use std::io::{Read, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::EvalError;
use crate::geo::{haversine_m, GeoPoint};
use crate::ingest::TrajectoryDb;
use crate::search::Query;

pub const DEFAULT_QUERY_COUNT: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuerySet {
    pub queries: Vec<Query>,
    pub seed: Option<u64>,
    pub source: String,
}

impl QuerySet {
    pub fn new(queries: Vec<Query>, source: impl Into<String>) -> Self {
        Self {
            queries,
            seed: None,
            source: source.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.queries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.queries.is_empty()
    }
}

/// Samples origin/destination pairs from recorded trips. Each draw picks a
/// trajectory, a start point, and a later end point; pairs closer than
/// `2 * d_thres` are redrawn.
pub fn generate_queries(db: &TrajectoryDb, count: usize, seed: u64, d_thres: f64) -> Result<QuerySet, EvalError> {
    if count == 0 {
        return Err(EvalError::ZeroCount);
    }
    if db.is_empty() {
        return Err(EvalError::EmptyDb);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_draws = count.saturating_mul(100);
    let mut queries = Vec::with_capacity(count);
    let mut draws = 0;
    while queries.len() < count && draws < max_draws {
        draws += 1;
        let t = &db.trajectories[rng.gen_range(0..db.len())];
        let start = rng.gen_range(0..t.points.len() - 1);
        let end = rng.gen_range(start + 1..t.points.len());
        let (a, b) = (t.points[start], t.points[end]);
        if haversine_m(a.pos, b.pos) < 2.0 * d_thres {
            continue;
        }
        queries.push(Query::new(a.pos, b.pos, a.ts));
    }
    if queries.len() < count {
        return Err(EvalError::InsufficientData {
            requested: count,
            produced: queries.len(),
            draws,
        });
    }
    Ok(QuerySet {
        queries,
        seed: Some(seed),
        source: format!("sampled from {} trajectories, seed {seed}", db.len()),
    })
}

#[derive(Serialize, Deserialize)]
struct QueryRow {
    query_idx: usize,
    origin_lat: f64,
    origin_lon: f64,
    dest_lat: f64,
    dest_lon: f64,
    depart_ts: i64,
}

pub fn write_queries<W: Write>(qs: &QuerySet, writer: W) -> Result<(), EvalError> {
    let mut w = csv::Writer::from_writer(writer);
    for (i, q) in qs.queries.iter().enumerate() {
        w.serialize(QueryRow {
            query_idx: i,
            origin_lat: q.origin.lat,
            origin_lon: q.origin.lon,
            dest_lat: q.dest.lat,
            dest_lon: q.dest.lon,
            depart_ts: q.depart_ts,
        })?;
    }
    w.flush().map_err(|e| EvalError::Csv(e.into()))?;
    Ok(())
}

/// Reads a query file written by [`write_queries`]. Rows are ordered by
/// `query_idx`.
pub fn read_queries<R: Read>(reader: R, source: impl Into<String>) -> Result<QuerySet, EvalError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let mut rows: Vec<QueryRow> = rdr.deserialize().collect::<Result<_, _>>()?;
    rows.sort_by_key(|r| r.query_idx);
    let mut queries = Vec::with_capacity(rows.len());
    for r in rows {
        let origin = GeoPoint::new(r.origin_lat, r.origin_lon).map_err(crate::search::SearchError::from)?;
        let dest = GeoPoint::new(r.dest_lat, r.dest_lon).map_err(crate::search::SearchError::from)?;
        queries.push(Query::new(origin, dest, r.depart_ts));
    }
    Ok(QuerySet::new(queries, source))
}
