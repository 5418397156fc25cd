//! How each transition kind is priced, and how the penalty and reward knobs
//! move the search cost away from the physical travel time.

use trajgrid::cost::{adjust, cost_road, cost_traj, heuristic, CostParams, TransitionKind};
use trajgrid::geo::GeoPoint;
use trajgrid::index::SourceKind;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = CostParams { tau_c: 5.0, ..CostParams::default() };
    println!("trajectory continue 100 -> 160: {} s", cost_traj(TransitionKind::TrajContinue, 100, 160, &p)?);
    println!("trajectory switch 200 -> 230:   {} s", cost_traj(TransitionKind::TrajSwitch, 200, 230, &p)?);

    let a = GeoPoint::new(37.77, -122.42)?;
    let b = a.offset_m(500.0, 0.0);
    println!("road continue 500 m at 10 m/s:  {:.2} s", cost_road(TransitionKind::RoadContinue, a, b, 10.0, &p)?);

    for r_penalty in [0.0, 1.0, 3.0] {
        let q = CostParams { r_penalty, ..p };
        println!("r_penalty {r_penalty}: 50 s road leg searches as {} s", adjust(TransitionKind::RoadContinue, SourceKind::Road, 50.0, &q));
    }
    for rw in [0.0, 0.25, 0.75] {
        let q = CostParams { rw, ..p };
        println!("rw {rw}: 60 s continuation searches as {:.3} s", adjust(TransitionKind::TrajContinue, SourceKind::Trajectory, 60.0, &q));
    }

    let far = a.offset_m(0.0, 3_129.0);
    println!("heuristic over 3129 m: {:.2} s", heuristic(a, far, &p));
    Ok(())
}
