//! Sweeping the road penalty over a small city and scoring each setting
//! against exact reference routes.

use trajgrid::eval::{run_sweep, Reference, SweepOptions, SweepParam};
use trajgrid::synth::window_city;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fx = window_city(24, 11);
    let mut base = fx.params;
    base.r_penalty = 0.0;
    let report = run_sweep(
        &fx.index,
        &fx.queries,
        &base,
        SweepParam::RPenalty,
        &[0.0, 0.5, 1.0, 2.0, 3.0, 5.0],
        &Reference::Oracle,
        &SweepOptions::default(),
    )?;
    print!("{}", report.to_csv_string());
    Ok(())
}
