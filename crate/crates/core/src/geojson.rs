//! GeoJSON rendering of routes. Coordinates are written `[lon, lat]`.

use serde_json::{json, Map, Value};

use crate::geo::GeoPoint;
use crate::index::SourceKind;
use crate::search::{Leg, RouteResult};

fn coord(p: &GeoPoint) -> Value {
    json!([p.lon, p.lat])
}

fn geometry(points: &[GeoPoint]) -> Value {
    if points.len() == 1 {
        json!({ "type": "Point", "coordinates": coord(&points[0]) })
    } else {
        json!({ "type": "LineString", "coordinates": points.iter().map(coord).collect::<Vec<_>>() })
    }
}

fn source_name(kind: SourceKind) -> &'static str {
    match kind {
        SourceKind::Trajectory => "trajectory",
        SourceKind::Road => "road",
    }
}

fn leg_properties(leg: &Leg) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("source".into(), json!(source_name(leg.kind)));
    m.insert("id".into(), json!(leg.id));
    m.insert("from_idx".into(), json!(leg.from_idx));
    m.insert("to_idx".into(), json!(leg.to_idx));
    m.insert("base_s".into(), json!(leg.base_s));
    m
}

/// A FeatureCollection holding the whole route as one feature.
pub fn route_geojson(r: &RouteResult) -> Value {
    route_geojson_with(r, false)
}

/// Like [`route_geojson`]; with `explode_legs`, each leg follows as its own
/// feature after the route.
pub fn route_geojson_with(r: &RouteResult, explode_legs: bool) -> Value {
    let legs: Vec<Value> = r.legs.iter().map(|l| Value::Object(leg_properties(l))).collect();
    let mut features = vec![json!({
        "type": "Feature",
        "geometry": geometry(&r.path),
        "properties": {
            "eta_s": r.eta_s,
            "search_cost_s": r.search_cost_s,
            "distance_m": r.distance_m,
            "road_legs": r.stats.road_legs,
            "traj_switches": r.stats.traj_switches,
            "expansions": r.stats.expansions,
            "legs": legs,
        }
    })];
    if explode_legs {
        for leg in &r.legs {
            let mut props = leg_properties(leg);
            props.insert("feature".into(), json!("leg"));
            features.push(json!({
                "type": "Feature",
                "geometry": geometry(&r.path[leg.path_from..=leg.path_to]),
                "properties": props,
            }));
        }
    }
    json!({ "type": "FeatureCollection", "features": features })
}
