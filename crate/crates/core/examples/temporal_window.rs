//! The departure-time window decides which recorded trips can be boarded.
//! Widening it admits trips recorded at other hours.

use trajgrid::cost::CostParams;
use trajgrid::search::find_path;
use trajgrid::synth::{window_city, window_city_column_offset_h};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fx = window_city(5, 3);
    println!("rows recorded at 02:00, column c recorded {:.1} to {:.1} h later", window_city_column_offset_h(0), window_city_column_offset_h(11));
    for w_h in [0.25, 0.5, 1.0, 2.0, 4.0, 12.0] {
        let params = CostParams { w_time: w_h * 3_600.0, ..fx.params };
        let (mut eta, mut roads, mut routed) = (0.0, 0, 0);
        for q in &fx.queries.queries {
            if let Ok(r) = find_path(&fx.index, q, &params) {
                eta += r.eta_s;
                roads += r.stats.road_legs;
                routed += 1;
            }
        }
        println!(
            "w_time {w_h:>5.2} h: {routed} routed, mean eta {:>6.0} s, {roads} road legs",
            eta / routed.max(1) as f64
        );
    }
    Ok(())
}
