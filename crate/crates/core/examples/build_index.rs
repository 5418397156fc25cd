//! Building a grid index, querying a cell through a time window, and a
//! snapshot round trip.

use trajgrid::index::{GridIndex, TemporalFilter};
use trajgrid::synth::{hour, window_city, MONDAY};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let idx = window_city(1, 7).index;
    let stats = idx.stats();
    println!(
        "{} cells in use, {} trajectory points, {} road points",
        stats.cells_used, stats.traj_points, stats.road_points
    );

    let (&busiest, cell) = idx.cells().max_by_key(|(_, c)| c.traj_len()).expect("non-empty index");
    println!("busiest cell {busiest:?} holds {} trajectory entries", cell.traj_len());
    for h in [2.0, 6.0, 12.0] {
        let filter = TemporalFilter::around(hour(h), 1_800.0);
        let hits = idx.query_cell(busiest, Some(&filter));
        let traj = hits.iter().filter(|r| !r.is_road()).count();
        println!("  departing {:>4.1} h after {MONDAY}: {traj} trajectory hits, {} road", h, hits.len() - traj);
    }

    let path = std::env::temp_dir().join("trajgrid-example.idx");
    idx.save(&path)?;
    let back = GridIndex::load(&path)?;
    println!("snapshot {} bytes, identical after reload: {}", std::fs::metadata(&path)?.len(), back == idx);
    std::fs::remove_file(path)?;
    Ok(())
}
