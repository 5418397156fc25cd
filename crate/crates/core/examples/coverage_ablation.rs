//! Rebuilding the index from smaller shares of the trajectory data and
//! watching the router fall back to roads.

use trajgrid::eval::{coverage_ablation, Reference, SweepOptions};
use trajgrid::synth::disjoint_halves;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let raw = disjoint_halves(16, 5);
    let out = coverage_ablation(
        &raw.trajectories,
        &raw.roads,
        &raw.spec,
        &[0.2, 0.4, 0.6, 0.8, 1.0],
        &raw.queries,
        &raw.params,
        &Reference::None,
        &SweepOptions { measure_time: false, ..SweepOptions::default() },
    )?;
    for (lvl, row) in out.levels.iter().zip(&out.report.rows) {
        println!(
            "target {:.1}: {:>2} trips, {:>4} points, coverage {:.2}, avg road legs {:.2}, no path {}",
            lvl.level,
            lvl.trajectories,
            lvl.traj_points,
            lvl.coverage,
            row.aggregates.avg_road_legs,
            row.aggregates.no_path_count
        );
    }
    Ok(())
}
