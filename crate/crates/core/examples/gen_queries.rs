//! Seeded query generation and the query CSV format.

use trajgrid::eval::{generate_queries, read_queries, write_queries};
use trajgrid::synth::large_city;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let raw = large_city(20_000, 1);
    let qs = generate_queries(&raw.trajectories, 5, 42, raw.params.d_thres)?;
    let mut buf = Vec::new();
    write_queries(&qs, &mut buf)?;
    print!("{}", String::from_utf8(buf.clone())?);

    let again = generate_queries(&raw.trajectories, 5, 42, raw.params.d_thres)?;
    let parsed = read_queries(buf.as_slice(), "memory")?;
    println!("same seed, same queries: {}", again.queries == qs.queries);
    println!("round trip through CSV: {}", parsed.queries == qs.queries);
    Ok(())
}
