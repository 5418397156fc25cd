//! Distances, local projection and grid cells.

use trajgrid::geo::{cell_of, day_class, haversine_m, time_of_day, GeoPoint, GridSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ferry = GeoPoint::new(37.7955, -122.3937)?;
    let wharf = GeoPoint::new(37.8080, -122.4177)?;
    println!("ferry building -> wharf: {:.1} m", haversine_m(ferry, wharf));

    let spec = GridSpec::covering([ferry, wharf], 100.0, 1)?;
    println!("grid {} x {} cells of {} m", spec.cols, spec.rows, spec.cell_size_m);
    let proj = spec.projection();
    let (e, n) = proj.project(wharf);
    println!("wharf is {e:.1} m east, {n:.1} m north of the grid origin");
    println!("ferry cell {:?}, wharf cell {:?}", cell_of(ferry, &spec)?, cell_of(wharf, &spec)?);

    let ts = 1_704_112_200; // 2024-01-01 12:30 UTC, a Monday
    println!("{ts}: {:?}, second of day {}", day_class(ts), time_of_day(ts));
    Ok(())
}
