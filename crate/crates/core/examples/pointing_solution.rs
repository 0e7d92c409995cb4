//! Initial pointing solution between the two terminals of a scenario.
//!
//! cargo run --example pointing_solution [scenario.json]

use fsolink::cli::load_scenario;
use fsolink::geometry::{pointing_solution, slant_range_m};

fn scenario_arg(default: &str) -> String {
    std::env::args()
        .nth(1)
        .unwrap_or_else(|| format!("{}/../../scenarios/{default}.json", env!("CARGO_MANIFEST_DIR")))
}

fn main() -> fsolink::Result<()> {
    let s = load_scenario(scenario_arg("1km_default"))?;
    let a = s.node_a.position("node_a")?;
    let b = s.node_b.position("node_b")?;
    let ab = pointing_solution(&a, &b)?;
    let ba = pointing_solution(&b, &a)?;
    println!("slant range      {:10.2} m", slant_range_m(&a, &b));
    println!(
        "A -> B  azimuth  {:10.4} deg  elevation {:8.4} deg",
        ab.azimuth_rad.to_degrees(),
        ab.elevation_rad.to_degrees()
    );
    println!(
        "B -> A  azimuth  {:10.4} deg  elevation {:8.4} deg",
        ba.azimuth_rad.to_degrees(),
        ba.elevation_rad.to_degrees()
    );
    let target = s.gimbal_target()?;
    println!(
        "gimbal target at A (heading {:.1} deg): pitch {:.4} deg, azimuth {:.4} deg",
        s.node_a.heading_deg,
        target.pitch.to_degrees(),
        target.azimuth.to_degrees()
    );
    Ok(())
}
