//! Routing across two crossing trips and printing the result as GeoJSON.

use trajgrid::geojson::route_geojson_with;
use trajgrid::search::find_path;
use trajgrid::synth::hop_fixture;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fx = hop_fixture();
    let q = &fx.queries.queries[0];
    let route = find_path(&fx.index, q, &fx.params)?;

    println!("eta {:.0} s over {:.0} m, {} expansions", route.eta_s, route.distance_m, route.stats.expansions);
    for leg in &route.legs {
        println!("  {:?} {} points {}..={} ({:.0} s)", leg.kind, leg.id, leg.from_idx, leg.to_idx, leg.base_s);
    }
    println!("{}", serde_json::to_string_pretty(&route_geojson_with(&route, true))?);
    Ok(())
}
