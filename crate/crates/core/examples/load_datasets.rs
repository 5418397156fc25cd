//! Reading trajectory CSV and road GeoJSON, with the trip filter applied.

use std::io::Cursor;

use trajgrid::ingest::{read_road_network, read_trajectories, RoadOptions};

const TRIPS: &str = "\
traj_id,lat,lon,ts
a,37.7700,-122.4200,1704110400
a,37.7745,-122.4200,1704110460
a,37.7790,-122.4200,1704110520
b,37.7700,-122.4200,1704110400
b,37.7701,-122.4200,1704110410
";

const ROADS: &str = r#"{"type":"FeatureCollection","features":[
 {"type":"Feature","properties":{"id":"mission","speed_mps":11.2},
  "geometry":{"type":"LineString","coordinates":[[-122.42,37.77],[-122.41,37.77]]}},
 {"type":"Feature","properties":{"id":"valencia"},
  "geometry":{"type":"LineString","coordinates":[[-122.421,37.76],[-122.421,37.77]]}}
]}"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let db = read_trajectories(Cursor::new(TRIPS))?;
    for t in &db.trajectories {
        println!("{}: {} points, {:.0} m, {} s", t.id, t.len(), t.length_m(), t.duration_s());
    }
    println!("kept {} trajectory(ies), dropped {}", db.len(), db.dropped);

    let net = read_road_network(Cursor::new(ROADS), &RoadOptions::default())?;
    for s in &net.segments {
        println!("road {}: {} points at {} m/s", s.id, s.len(), s.speed_mps);
    }
    Ok(())
}
