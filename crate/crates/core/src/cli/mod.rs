//! The `trajgrid` command line: index building, routing, and evaluation.
//!
//! Exit status is 0 on success, 1 on any error, and 2 when `route` finds no
//! path.

mod config;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use chrono::{DateTime, NaiveDateTime};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

pub use config::{Config, EvalConfig, GridConfig, PathsConfig};

use crate::eval::{
    coverage_ablation, generate_queries, read_queries, read_reference, run_sweep, write_queries, QuerySet,
    Reference, SweepOptions, SweepParam, SweepReport,
};
use crate::geo::{GeoPoint, GridSpec};
use crate::geojson::route_geojson_with;
use crate::index::GridIndex;
use crate::ingest::{load_road_network, load_trajectories, spatial_coverage, RoadNetwork, RoadOptions};
use crate::search::{find_path_with, Query, SearchError, SearchOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NO_PATH: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "trajgrid", version, about = "Route over historical GPS trajectories with road fallback")]
pub struct Cli {
    /// TOML config file; flags override its values.
    #[arg(long, global = true, env = "TRAJROUTE_CONFIG", value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build or inspect a grid index snapshot.
    #[command(subcommand)]
    Index(IndexCommand),
    /// Find a route and print it as GeoJSON.
    Route(RouteArgs),
    /// Run evaluation experiments.
    #[command(subcommand)]
    Eval(EvalCommand),
}

#[derive(Debug, Subcommand)]
pub enum IndexCommand {
    /// Load trajectories and roads, build the index, and save a snapshot.
    Build(BuildArgs),
    /// Print statistics of a saved snapshot.
    Stats(StatsArgs),
}

#[derive(Debug, Subcommand)]
pub enum EvalCommand {
    /// Sweep one cost parameter over a list of values.
    Sweep(SweepArgs),
    /// Rerun queries on trajectory subsets of increasing road coverage.
    Coverage(CoverageArgs),
    /// Sample origin/destination queries from the trajectories.
    GenQueries(GenQueriesArgs),
}

/// Where the trajectories and roads come from.
#[derive(Debug, Clone, Default, Args)]
pub struct DataArgs {
    /// Index snapshot written by `index build`.
    #[arg(long, value_name = "FILE")]
    pub index: Option<PathBuf>,
    /// Trajectory CSV (traj_id,lat,lon,ts); used when no snapshot is given.
    #[arg(long, value_name = "FILE")]
    pub trajectories: Option<PathBuf>,
    /// Road network GeoJSON FeatureCollection of LineStrings.
    #[arg(long, value_name = "FILE")]
    pub roads: Option<PathBuf>,
    /// Grid cell size in meters.
    #[arg(long, value_name = "M")]
    pub cell_size: Option<f64>,
    /// Explicit grid extent, comma- or space-separated.
    #[arg(long, value_names = ["MIN_LAT", "MIN_LON", "MAX_LAT", "MAX_LON"], value_delimiter = ',', num_args = 4)]
    pub bbox: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CostArgs {
    /// Road penalty: road legs cost (1 + r_penalty) times their travel time.
    #[arg(long, value_name = "X")]
    pub r_penalty: Option<f64>,
    /// Continuity reward: same-trajectory legs are scaled by exp(-rw).
    #[arg(long, value_name = "X")]
    pub rw: Option<f64>,
    /// Fixed cost in seconds for switching between trajectories or roads.
    #[arg(long, value_name = "S")]
    pub tau_c: Option<f64>,
    /// Half-width of the departure time window in seconds.
    #[arg(long, value_name = "S")]
    pub w_time: Option<f64>,
    /// Stop once within this many meters of the destination.
    #[arg(long, value_name = "M")]
    pub d_thres: Option<f64>,
    /// Speed bound for the search heuristic, m/s.
    #[arg(long, value_name = "MPS")]
    pub v_max: Option<f64>,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Snapshot file to write.
    #[arg(long, short, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    /// Snapshot file to read.
    #[arg(long, value_name = "FILE")]
    pub index: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RouteArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub cost: CostArgs,
    /// Origin as lat,lon.
    #[arg(long, value_name = "LAT,LON", allow_hyphen_values = true)]
    pub origin: String,
    /// Destination as lat,lon.
    #[arg(long, value_name = "LAT,LON", allow_hyphen_values = true)]
    pub dest: String,
    /// Departure time: epoch seconds or ISO 8601 (UTC unless an offset is given).
    #[arg(long, value_name = "TIME")]
    pub depart: String,
    /// Add one GeoJSON feature per leg after the full route.
    #[arg(long)]
    pub explode_legs: bool,
    /// Also board from the eight cells around the origin cell.
    #[arg(long)]
    pub adjacent_origin_cells: bool,
}

#[derive(Debug, Clone, Default, Args)]
pub struct QueryArgs {
    /// Query CSV written by `eval gen-queries`; sampled from the data when absent.
    #[arg(long, value_name = "FILE")]
    pub queries: Option<PathBuf>,
    /// Number of queries to sample.
    #[arg(long, value_name = "N")]
    pub count: Option<usize>,
    /// Random seed for sampling.
    #[arg(long, value_name = "N")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ReferenceArgs {
    /// Reference CSV (query_idx,ref_eta_s,ref_dist_m); the built-in exact
    /// search is used when absent.
    #[arg(long, value_name = "FILE")]
    pub reference: Option<PathBuf>,
    /// Skip error metrics.
    #[arg(long, conflicts_with = "reference")]
    pub no_reference: bool,
    /// Write zero for query times, making output byte-reproducible.
    #[arg(long)]
    pub no_timing: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub cost: CostArgs,
    #[command(flatten)]
    pub queries: QueryArgs,
    #[command(flatten)]
    pub reference: ReferenceArgs,
    /// Parameter to sweep: r_penalty, rw, or w_time.
    #[arg(long, value_name = "NAME")]
    pub param: String,
    /// Comma-separated values; w_time values accept an `h` suffix for hours.
    #[arg(long, value_name = "LIST", value_delimiter = ',')]
    pub values: Option<Vec<String>>,
    /// Output CSV; stdout when absent.
    #[arg(long, short, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CoverageArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub cost: CostArgs,
    #[command(flatten)]
    pub queries: QueryArgs,
    #[command(flatten)]
    pub reference: ReferenceArgs,
    /// Comma-separated coverage fractions in (0, 1].
    #[arg(long, value_name = "LIST", value_delimiter = ',')]
    pub levels: Option<Vec<f64>>,
    /// Output CSV; stdout when absent.
    #[arg(long, short, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenQueriesArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Number of queries.
    #[arg(long, value_name = "N")]
    pub count: Option<usize>,
    /// Random seed.
    #[arg(long, value_name = "N")]
    pub seed: Option<u64>,
    /// Minimum-separation radius; pairs closer than twice this are redrawn.
    #[arg(long, value_name = "M")]
    pub d_thres: Option<f64>,
    /// Output CSV; stdout when absent.
    #[arg(long, short, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

impl DataArgs {
    fn apply(&self, cfg: &mut Config) -> Result<()> {
        set(&mut cfg.paths.index, self.index.clone());
        set(&mut cfg.paths.trajectories, self.trajectories.clone());
        set(&mut cfg.paths.roads, self.roads.clone());
        if let Some(c) = self.cell_size {
            cfg.grid.cell_size_m = c;
        }
        if let Some(b) = &self.bbox {
            let b: [f64; 4] = b.as_slice().try_into().map_err(|_| anyhow!("--bbox takes four numbers"))?;
            cfg.grid.bbox = Some(b);
        }
        Ok(())
    }
}

fn set<T>(slot: &mut Option<T>, v: Option<T>) {
    if v.is_some() {
        *slot = v;
    }
}

impl CostArgs {
    fn apply(&self, cfg: &mut Config) {
        let c = &mut cfg.cost;
        for (slot, v) in [
            (&mut c.r_penalty, self.r_penalty),
            (&mut c.rw, self.rw),
            (&mut c.tau_c, self.tau_c),
            (&mut c.w_time, self.w_time),
            (&mut c.d_thres, self.d_thres),
            (&mut c.v_max, self.v_max),
        ] {
            if let Some(v) = v {
                *slot = v;
            }
        }
    }
}

/// Parses `lat,lon`.
pub fn parse_point(s: &str) -> Result<GeoPoint> {
    let (lat, lon) = s
        .split_once(',')
        .ok_or_else(|| anyhow!("expected LAT,LON, got {s:?}"))?;
    let lat: f64 = lat.trim().parse().with_context(|| format!("bad latitude in {s:?}"))?;
    let lon: f64 = lon.trim().parse().with_context(|| format!("bad longitude in {s:?}"))?;
    Ok(GeoPoint::new(lat, lon)?)
}

/// Parses epoch seconds, RFC 3339, or a naive `YYYY-MM-DDTHH:MM:SS` taken as
/// UTC.
pub fn parse_time(s: &str) -> Result<i64> {
    let s = s.trim();
    if let Ok(ts) = s.parse::<i64>() {
        return Ok(ts);
    }
    if let Ok(dt) = DateTime::parse_from_rfc3339(s) {
        return Ok(dt.timestamp());
    }
    for fmt in ["%Y-%m-%dT%H:%M:%S", "%Y-%m-%d %H:%M:%S", "%Y-%m-%dT%H:%M"] {
        if let Ok(dt) = NaiveDateTime::parse_from_str(s, fmt) {
            return Ok(dt.and_utc().timestamp());
        }
    }
    bail!("cannot parse time {s:?}; use epoch seconds or ISO 8601")
}

fn parse_value(param: SweepParam, s: &str) -> Result<f64> {
    let s = s.trim();
    if param == SweepParam::WTime {
        if let Some(h) = s.strip_suffix('h') {
            return Ok(h.trim().parse::<f64>().with_context(|| format!("bad value {s:?}"))? * 3_600.0);
        }
    }
    s.parse().with_context(|| format!("bad value {s:?}"))
}

fn grid_from_bbox(b: [f64; 4], cell: f64) -> Result<GridSpec> {
    let origin = GeoPoint::new(b[0], b[1])?;
    let (east, north) = GridSpec::new(origin, cell, 1, 1)?
        .projection()
        .project(GeoPoint::new(b[2], b[3])?);
    let cols = (east / cell).floor() as u32 + 1;
    let rows = (north / cell).floor() as u32 + 1;
    Ok(GridSpec::new(origin, cell, cols, rows)?)
}

struct Loaded {
    index: GridIndex,
    coverage: Option<f64>,
}

fn load_index(cfg: &Config) -> Result<Loaded> {
    if let Some(path) = &cfg.paths.index {
        let index = GridIndex::load(path).with_context(|| format!("loading index {}", path.display()))?;
        return Ok(Loaded { index, coverage: None });
    }
    let tpath = cfg
        .paths
        .trajectories
        .as_ref()
        .ok_or_else(|| anyhow!("no data: pass --index or --trajectories (or set paths in the config)"))?;
    let db = load_trajectories(tpath)?;
    let net = match &cfg.paths.roads {
        Some(p) => load_road_network(
            p,
            &RoadOptions {
                default_speed_mps: cfg.grid.default_road_speed_mps,
                max_speed_mps: cfg.cost.v_max,
            },
        )?,
        None => RoadNetwork::default(),
    };
    let index = match cfg.grid.bbox {
        Some(b) => GridIndex::build(db, net, grid_from_bbox(b, cfg.grid.cell_size_m)?)?,
        None => GridIndex::build_covering(db, net, cfg.grid.cell_size_m)?,
    };
    let coverage = (!index.roads().is_empty()).then(|| spatial_coverage(index.trajectories(), index.roads(), index.spec()));
    Ok(Loaded { index, coverage })
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn stats_json(index: &GridIndex, coverage: Option<f64>, build_s: Option<f64>) -> serde_json::Value {
    let st = index.stats();
    let spec = index.spec();
    json!({
        "trajectories": index.trajectories().len(),
        "dropped_trajectories": index.trajectories().dropped,
        "trajectory_points": st.traj_points,
        "road_segments": index.roads().len(),
        "road_points": st.road_points,
        "cells_used": st.cells_used,
        "grid": { "cols": spec.cols, "rows": spec.rows, "cell_size_m": spec.cell_size_m,
                  "origin": [spec.origin.lat, spec.origin.lon] },
        "coverage": coverage,
        "build_seconds": build_s,
    })
}

fn print_stats(json_out: bool, v: &serde_json::Value) -> Result<()> {
    if json_out {
        println!("{}", serde_json::to_string_pretty(v)?);
        return Ok(());
    }
    println!(
        "trajectories: {} ({} dropped by the trip filter), {} points",
        v["trajectories"], v["dropped_trajectories"], v["trajectory_points"]
    );
    println!("road segments: {}, {} points", v["road_segments"], v["road_points"]);
    println!(
        "grid: {} x {} cells of {} m, {} in use",
        v["grid"]["cols"], v["grid"]["rows"], v["grid"]["cell_size_m"], v["cells_used"]
    );
    if let Some(c) = v["coverage"].as_f64() {
        println!("road coverage: {:.1}%", c * 100.0);
    }
    if let Some(s) = v["build_seconds"].as_f64() {
        println!("build time: {s:.3} s");
    }
    Ok(())
}

fn cmd_index_build(cfg: &Config, out: Option<&Path>, json_out: bool) -> Result<i32> {
    let out = out
        .or(cfg.paths.index.as_deref())
        .ok_or_else(|| anyhow!("--out is required"))?;
    let mut cfg = cfg.clone();
    cfg.paths.index = None;
    let start = Instant::now();
    let loaded = load_index(&cfg)?;
    let build_s = start.elapsed().as_secs_f64();
    loaded.index.save(out)?;
    print_stats(json_out, &stats_json(&loaded.index, loaded.coverage, Some(build_s)))?;
    Ok(EXIT_OK)
}

fn cmd_index_stats(cfg: &Config, json_out: bool) -> Result<i32> {
    let path = cfg.paths.index.as_ref().ok_or_else(|| anyhow!("--index is required"))?;
    let index = GridIndex::load(path).with_context(|| format!("loading index {}", path.display()))?;
    let coverage = (!index.roads().is_empty()).then(|| spatial_coverage(index.trajectories(), index.roads(), index.spec()));
    print_stats(json_out, &stats_json(&index, coverage, None))?;
    Ok(EXIT_OK)
}

fn cmd_route(cfg: &Config, a: &RouteArgs) -> Result<i32> {
    let q = Query::new(parse_point(&a.origin)?, parse_point(&a.dest)?, parse_time(&a.depart)?);
    let loaded = load_index(cfg)?;
    let opts = SearchOptions {
        adjacent_origin_cells: a.adjacent_origin_cells,
    };
    match find_path_with(&loaded.index, &q, &cfg.cost, &opts) {
        Ok(route) => {
            println!("{}", serde_json::to_string(&route_geojson_with(&route, a.explode_legs))?);
            Ok(EXIT_OK)
        }
        Err(SearchError::NoPath { expansions, nearest_m }) => {
            eprintln!(
                "no path: searched {expansions} nodes; closest approach {nearest_m:.1} m from the destination \
                 (d_thres {} m, w_time {} s)",
                cfg.cost.d_thres, cfg.cost.w_time
            );
            Ok(EXIT_NO_PATH)
        }
        Err(e) => Err(e.into()),
    }
}

fn query_set(index: &GridIndex, cfg: &Config, a: &QueryArgs) -> Result<QuerySet> {
    match &a.queries {
        Some(p) => {
            let f = File::open(p).with_context(|| format!("opening {}", p.display()))?;
            Ok(read_queries(f, p.display().to_string())?)
        }
        None => Ok(generate_queries(
            index.trajectories(),
            a.count.unwrap_or(cfg.eval.query_count),
            a.seed.unwrap_or(cfg.eval.seed),
            cfg.cost.d_thres,
        )?),
    }
}

fn reference(a: &ReferenceArgs) -> Result<Reference> {
    if a.no_reference {
        return Ok(Reference::None);
    }
    match &a.reference {
        Some(p) => {
            let f = File::open(p).with_context(|| format!("opening {}", p.display()))?;
            Ok(Reference::Table(read_reference(f)?))
        }
        None => Ok(Reference::Oracle),
    }
}

fn sweep_options(a: &ReferenceArgs) -> SweepOptions {
    SweepOptions {
        measure_time: !a.no_timing,
        ..SweepOptions::default()
    }
}

fn summarize(rep: &SweepReport, queries: usize) {
    let no_path: usize = rep.rows.iter().map(|r| r.aggregates.no_path_count).sum();
    eprintln!(
        "{}: {} values x {queries} queries, {no_path} unrouted",
        rep.param,
        rep.rows.len()
    );
}

fn cmd_sweep(cfg: &Config, a: &SweepArgs) -> Result<i32> {
    let param: SweepParam = a.param.parse()?;
    let values: Vec<f64> = match &a.values {
        Some(v) => v.iter().map(|s| parse_value(param, s)).collect::<Result<_>>()?,
        None => cfg
            .eval
            .values
            .clone()
            .ok_or_else(|| anyhow!("--values is required (or eval.values in the config)"))?,
    };
    let loaded = load_index(cfg)?;
    let qs = query_set(&loaded.index, cfg, &a.queries)?;
    let rep = run_sweep(
        &loaded.index,
        &qs,
        &cfg.cost,
        param,
        &values,
        &reference(&a.reference)?,
        &sweep_options(&a.reference),
    )?;
    let mut w = output(a.out.as_deref())?;
    rep.write_csv(&mut w)?;
    w.flush()?;
    summarize(&rep, qs.len());
    Ok(EXIT_OK)
}

fn cmd_coverage(cfg: &Config, a: &CoverageArgs) -> Result<i32> {
    let levels = a
        .levels
        .clone()
        .or_else(|| cfg.eval.levels.clone())
        .unwrap_or_else(|| vec![0.05, 0.25, 0.5, 0.75, 1.0]);
    let loaded = load_index(cfg)?;
    let idx = &loaded.index;
    let qs = query_set(idx, cfg, &a.queries)?;
    let rep = coverage_ablation(
        idx.trajectories(),
        idx.roads(),
        idx.spec(),
        &levels,
        &qs,
        &cfg.cost,
        &reference(&a.reference)?,
        &sweep_options(&a.reference),
    )?;
    let mut w = output(a.out.as_deref())?;
    rep.report.write_csv(&mut w)?;
    w.flush()?;
    for l in &rep.levels {
        eprintln!(
            "level {}: {} trajectories, {} points, coverage {:.3}",
            l.level, l.trajectories, l.traj_points, l.coverage
        );
    }
    summarize(&rep.report, qs.len());
    Ok(EXIT_OK)
}

fn cmd_gen_queries(cfg: &Config, a: &GenQueriesArgs) -> Result<i32> {
    let loaded = load_index(cfg)?;
    let qs = generate_queries(
        loaded.index.trajectories(),
        a.count.unwrap_or(cfg.eval.query_count),
        a.seed.unwrap_or(cfg.eval.seed),
        a.d_thres.unwrap_or(cfg.cost.d_thres),
    )?;
    let mut w = output(a.out.as_deref())?;
    write_queries(&qs, &mut w)?;
    w.flush()?;
    eprintln!("{} queries, {}", qs.len(), qs.source);
    Ok(EXIT_OK)
}

/// Runs a parsed command line and returns the process exit status.
pub fn execute(cli: Cli) -> Result<i32> {
    let mut cfg = Config::load_or_default(cli.config.as_deref())?;
    match &cli.command {
        Command::Index(IndexCommand::Build(a)) => {
            a.data.apply(&mut cfg)?;
            cfg.validate()?;
            cmd_index_build(&cfg, a.out.as_deref(), cli.json)
        }
        Command::Index(IndexCommand::Stats(a)) => {
            set(&mut cfg.paths.index, a.index.clone());
            cmd_index_stats(&cfg, cli.json)
        }
        Command::Route(a) => {
            a.data.apply(&mut cfg)?;
            a.cost.apply(&mut cfg);
            cfg.validate()?;
            cmd_route(&cfg, a)
        }
        Command::Eval(EvalCommand::Sweep(a)) => {
            a.data.apply(&mut cfg)?;
            a.cost.apply(&mut cfg);
            cfg.validate()?;
            cmd_sweep(&cfg, a)
        }
        Command::Eval(EvalCommand::Coverage(a)) => {
            a.data.apply(&mut cfg)?;
            a.cost.apply(&mut cfg);
            cfg.validate()?;
            cmd_coverage(&cfg, a)
        }
        Command::Eval(EvalCommand::GenQueries(a)) => {
            a.data.apply(&mut cfg)?;
            cfg.validate()?;
            cmd_gen_queries(&cfg, a)
        }
    }
}

/// Entry point for the binary: parses `args`, runs, and reports errors on
/// stderr.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_ERROR
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_tree_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn times() {
        assert_eq!(parse_time("1704110400").unwrap(), 1_704_110_400);
        assert_eq!(parse_time("2024-01-01T12:00:00Z").unwrap(), 1_704_110_400);
        assert_eq!(parse_time("2024-01-01T14:00:00+02:00").unwrap(), 1_704_110_400);
        assert_eq!(parse_time("2024-01-01T12:00:00").unwrap(), 1_704_110_400);
        assert!(parse_time("noon").is_err());
    }

    #[test]
    fn points() {
        let p = parse_point("37.5, -122.25").unwrap();
        assert_eq!((p.lat, p.lon), (37.5, -122.25));
        assert!(parse_point("91,0").is_err());
        assert!(parse_point("37.5").is_err());
    }

    #[test]
    fn sweep_values() {
        assert_eq!(parse_value(SweepParam::WTime, "2h").unwrap(), 7_200.0);
        assert_eq!(parse_value(SweepParam::WTime, "900").unwrap(), 900.0);
        assert!(parse_value(SweepParam::RPenalty, "2h").is_err());
    }

    #[test]
    fn bbox_grid_covers_corners() {
        let spec = grid_from_bbox([37.70, -122.50, 37.75, -122.45], 100.0).unwrap();
        assert!(spec.contains(GeoPoint::new(37.70, -122.50).unwrap()));
        assert!(spec.contains(GeoPoint::new(37.75, -122.45).unwrap()));
    }
}
