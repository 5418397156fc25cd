use std::collections::HashMap;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{mae, oracle_route, EvalError, QuerySet};
use crate::cost::CostParams;
use crate::index::GridIndex;
use crate::search::{find_path_with, RouteResult, SearchError, SearchOptions};

pub const SWEEP_HEADER: &str =
    "param_value,mae_time_s,mae_dist_m,avg_road_legs,avg_traj_switches,avg_query_ms,no_path_count";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SweepParam {
    RPenalty,
    Rw,
    WTime,
}

impl SweepParam {
    pub const ALL: [SweepParam; 3] = [SweepParam::RPenalty, SweepParam::Rw, SweepParam::WTime];

    pub fn name(self) -> &'static str {
        match self {
            SweepParam::RPenalty => "r_penalty",
            SweepParam::Rw => "rw",
            SweepParam::WTime => "w_time",
        }
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParam {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| EvalError::UnknownParam(s.to_string()))
    }
}

/// One row of an external reference file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceRow {
    pub query_idx: usize,
    pub ref_eta_s: f64,
    pub ref_dist_m: f64,
}

/// Where the reference travel times and distances come from.
#[derive(Debug, Clone, PartialEq)]
pub enum Reference {
    /// Exact search on each query's materialized graph, under the base
    /// parameters. Only possible on small indexes.
    Oracle,
    /// Values computed elsewhere, keyed by query index.
    Table(Vec<ReferenceRow>),
    /// Skip error metrics.
    None,
}

pub fn read_reference<R: Read>(reader: R) -> Result<Vec<ReferenceRow>, EvalError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    Ok(rdr.deserialize().collect::<Result<_, _>>()?)
}

pub fn write_reference<W: Write>(rows: &[ReferenceRow], writer: W) -> Result<(), EvalError> {
    let mut w = csv::Writer::from_writer(writer);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| EvalError::Csv(e.into()))?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepOptions {
    /// Record wall-clock time per query. Turned off, timings are written as
    /// zero so reports are byte-identical across runs.
    pub measure_time: bool,
    pub search: SearchOptions,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            measure_time: true,
            search: SearchOptions::default(),
        }
    }
}

/// What one query produced at one parameter setting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QueryOutcome {
    pub eta_s: f64,
    pub distance_m: f64,
    pub road_legs: usize,
    pub traj_switches: usize,
    pub query_ms: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aggregates {
    pub mae_time_s: f64,
    pub mae_dist_m: f64,
    pub avg_road_legs: f64,
    pub avg_traj_switches: f64,
    pub avg_query_ms: f64,
    pub median_query_ms: f64,
    pub no_path_count: usize,
    /// Queries with both an engine route and a reference value.
    pub compared: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub param_value: f64,
    pub aggregates: Aggregates,
    pub outcomes: Vec<Option<QueryOutcome>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub param: String,
    pub rows: Vec<SweepRow>,
}

impl SweepReport {
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "{SWEEP_HEADER}")?;
        for r in &self.rows {
            let a = &r.aggregates;
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                r.param_value,
                a.mae_time_s,
                a.mae_dist_m,
                a.avg_road_legs,
                a.avg_traj_switches,
                a.avg_query_ms,
                a.no_path_count
            )?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }
}

type RefValues = Vec<Option<(f64, f64)>>;

pub(super) fn reference_values(
    idx: &GridIndex,
    qs: &QuerySet,
    base: &CostParams,
    reference: &Reference,
    opts: &SweepOptions,
) -> Result<Option<RefValues>, EvalError> {
    match reference {
        Reference::None => Ok(None),
        Reference::Table(rows) => {
            let by_idx: HashMap<usize, &ReferenceRow> = rows.iter().map(|r| (r.query_idx, r)).collect();
            if rows.iter().all(|r| r.query_idx >= qs.len()) && !qs.is_empty() {
                return Err(EvalError::MissingReference(
                    "reference file has no rows for this query set".into(),
                ));
            }
            Ok(Some(
                (0..qs.len())
                    .map(|i| by_idx.get(&i).map(|r| (r.ref_eta_s, r.ref_dist_m)))
                    .collect(),
            ))
        }
        Reference::Oracle => {
            let vals: Vec<Result<Option<(f64, f64)>, EvalError>> = qs
                .queries
                .par_iter()
                .map(|q| match oracle_route(idx, q, base, &opts.search) {
                    Ok(r) => Ok(Some((r.eta_s, r.distance_m))),
                    Err(EvalError::NoPath) => Ok(None),
                    Err(EvalError::Search(SearchError::TooLarge { points, limit })) => {
                        Err(EvalError::MissingReference(format!(
                            "index has {points} points, too many for the built-in oracle (limit {limit}); \
                             supply a reference CSV"
                        )))
                    }
                    Err(e) => Err(e),
                })
                .collect();
            vals.into_iter().collect::<Result<Vec<_>, _>>().map(Some)
        }
    }
}

fn run_query(idx: &GridIndex, q: &crate::search::Query, params: &CostParams, opts: &SweepOptions) -> Result<Option<QueryOutcome>, EvalError> {
    let start = Instant::now();
    let res = find_path_with(idx, q, params, &opts.search);
    let query_ms = if opts.measure_time {
        start.elapsed().as_secs_f64() * 1e3
    } else {
        0.0
    };
    match res {
        Ok(RouteResult {
            eta_s,
            distance_m,
            stats,
            ..
        }) => Ok(Some(QueryOutcome {
            eta_s,
            distance_m,
            road_legs: stats.road_legs,
            traj_switches: stats.traj_switches,
            query_ms,
        })),
        Err(SearchError::NoPath { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

/// Runs every query under `params` (in parallel, results in query order) and
/// aggregates against the reference values.
pub(super) fn evaluate(
    idx: &GridIndex,
    qs: &QuerySet,
    params: &CostParams,
    refs: Option<&RefValues>,
    opts: &SweepOptions,
) -> Result<(Aggregates, Vec<Option<QueryOutcome>>), EvalError> {
    params.validate()?;
    let outcomes: Vec<Option<QueryOutcome>> = qs
        .queries
        .par_iter()
        .map(|q| run_query(idx, q, params, opts))
        .collect::<Result<_, _>>()?;
    Ok((aggregate(&outcomes, refs), outcomes))
}

fn mean(xs: impl ExactSizeIterator<Item = f64>) -> f64 {
    let n = xs.len();
    if n == 0 {
        return f64::NAN;
    }
    xs.sum::<f64>() / n as f64
}

fn aggregate(outcomes: &[Option<QueryOutcome>], refs: Option<&RefValues>) -> Aggregates {
    let routed: Vec<&QueryOutcome> = outcomes.iter().flatten().collect();
    let (mut xs_t, mut rs_t, mut xs_d, mut rs_d) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    if let Some(refs) = refs {
        for (o, r) in outcomes.iter().zip(refs) {
            if let (Some(o), Some((rt, rd))) = (o, r) {
                xs_t.push(o.eta_s);
                rs_t.push(*rt);
                xs_d.push(o.distance_m);
                rs_d.push(*rd);
            }
        }
    }
    let mut times: Vec<f64> = routed.iter().map(|o| o.query_ms).collect();
    times.sort_by(f64::total_cmp);
    let median_query_ms = match times.len() {
        0 => f64::NAN,
        n if n % 2 == 1 => times[n / 2],
        n => (times[n / 2 - 1] + times[n / 2]) / 2.0,
    };
    Aggregates {
        mae_time_s: mae(&xs_t, &rs_t).unwrap_or(f64::NAN),
        mae_dist_m: mae(&xs_d, &rs_d).unwrap_or(f64::NAN),
        avg_road_legs: mean(routed.iter().map(|o| o.road_legs as f64)),
        avg_traj_switches: mean(routed.iter().map(|o| o.traj_switches as f64)),
        avg_query_ms: mean(routed.iter().map(|o| o.query_ms)),
        median_query_ms,
        no_path_count: outcomes.len() - routed.len(),
        compared: xs_t.len(),
    }
}

/// Runs the query set once per value of `param`, other parameters taken
/// from `base`. Reference values are computed once, under `base`.
pub fn run_sweep(
    idx: &GridIndex,
    qs: &QuerySet,
    base: &CostParams,
    param: SweepParam,
    values: &[f64],
    reference: &Reference,
    opts: &SweepOptions,
) -> Result<SweepReport, EvalError> {
    if values.is_empty() {
        return Err(EvalError::EmptyValues);
    }
    base.validate()?;
    let refs = reference_values(idx, qs, base, reference, opts)?;
    let mut rows = Vec::with_capacity(values.len());
    for &v in values {
        let mut params = *base;
        params.set(param.name(), v)?;
        let (aggregates, outcomes) = evaluate(idx, qs, &params, refs.as_ref(), opts)?;
        rows.push(SweepRow {
            param_value: v,
            aggregates,
            outcomes,
        });
    }
    Ok(SweepReport {
        param: param.name().to_string(),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn param_names() {
        for p in SweepParam::ALL {
            assert_eq!(p.name().parse::<SweepParam>().unwrap(), p);
        }
        let err = "speed".parse::<SweepParam>().unwrap_err();
        assert!(err.to_string().contains("r_penalty, rw, w_time"));
    }

    #[test]
    fn aggregate_excludes_missing_pairs() {
        let o = |eta: f64, legs| {
            Some(QueryOutcome {
                eta_s: eta,
                distance_m: 10.0 * eta,
                road_legs: legs,
                traj_switches: 0,
                query_ms: 0.0,
            })
        };
        let outcomes = vec![o(10.0, 1), None, o(30.0, 0), o(50.0, 2)];
        let refs = vec![Some((12.0, 100.0)), Some((1.0, 1.0)), None, Some((40.0, 500.0))];
        let a = aggregate(&outcomes, Some(&refs));
        assert_eq!(a.compared, 2);
        assert_eq!(a.mae_time_s, 6.0);
        assert_eq!(a.mae_dist_m, 0.0);
        assert_eq!(a.avg_road_legs, 1.0);
        assert_eq!(a.no_path_count, 1);
    }

    #[test]
    fn reference_csv_round_trip() {
        let rows = vec![
            ReferenceRow {
                query_idx: 0,
                ref_eta_s: 61.5,
                ref_dist_m: 1200.25,
            },
            ReferenceRow {
                query_idx: 3,
                ref_eta_s: 7.0,
                ref_dist_m: 80.0,
            },
        ];
        let mut buf = Vec::new();
        write_reference(&rows, &mut buf).unwrap();
        assert!(String::from_utf8_lossy(&buf).starts_with("query_idx,ref_eta_s,ref_dist_m\n"));
        assert_eq!(read_reference(buf.as_slice()).unwrap(), rows);
    }
}
