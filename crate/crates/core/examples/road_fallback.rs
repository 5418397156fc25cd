//! A trip and a faster parallel road. Raising the road penalty moves the
//! route from the road onto the trip.

use trajgrid::cost::CostParams;
use trajgrid::search::find_path;
use trajgrid::synth::flip_fixture;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fx = flip_fixture();
    let q = &fx.queries.queries[0];
    for r_penalty in [0.0, 0.5, 1.0, 2.0, 3.0] {
        let params = CostParams { r_penalty, ..fx.params };
        let r = find_path(&fx.index, q, &params)?;
        let sources: Vec<String> = r.legs.iter().map(|l| format!("{:?}:{}", l.kind, l.id)).collect();
        println!(
            "r_penalty {r_penalty:>3}: eta {:>5.1} s, search cost {:>6.1} s via {}",
            r.eta_s,
            r.search_cost_s,
            sources.join(" -> ")
        );
    }
    Ok(())
}
