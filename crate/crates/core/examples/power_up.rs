//! State sequence of one terminal from power-up to a closed link.
//!
//! cargo run --example power_up

use fsolink::apt::{run_apt, InitialState};
use fsolink::cli::load_scenario;
use fsolink::units::URAD;

fn main() -> fsolink::Result<()> {
    let mut s = load_scenario(format!(
        "{}/../../scenarios/1km_default.json",
        env!("CARGO_MANIFEST_DIR")
    ))?;
    s.apt.initial_state = InitialState::Stabilize;
    s.warmup_s = 0.0;
    let series = run_apt(&s.tracking_config()?, 2.0, s.seed)?;
    let mut previous = None;
    for sample in &series.samples {
        if previous != Some(sample.state) {
            println!(
                "{:7.3} s  {:<12} error {:10.2} urad",
                sample.t_s,
                sample.state.name(),
                sample.radial_error() / URAD
            );
            previous = Some(sample.state);
        }
    }
    Ok(())
}
