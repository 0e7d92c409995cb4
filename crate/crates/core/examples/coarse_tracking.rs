//! Two minutes of gimbal-only tracking at 1 km.
//!
//! cargo run --release --example coarse_tracking

use fsolink::cli::{cmd_track, load_scenario};
use fsolink::units::URAD;

fn main() -> fsolink::Result<()> {
    let s = load_scenario(format!(
        "{}/../../scenarios/1km_coarse_only.json",
        env!("CARGO_MANIFEST_DIR")
    ))?;
    let (series, report) = cmd_track(&s, 120.0, s.seed, s.apt.stages)?;
    let o = report.overall;
    println!("{} samples at {} s", series.len(), series.sample_period_s);
    println!("radial mean   {:6.2} urad", o.radial_mean_rad / URAD);
    println!(
        "pitch   mean  {:6.2} urad  std {:6.2} urad",
        o.pitch_mean_rad / URAD,
        o.pitch_std_rad / URAD
    );
    println!(
        "azimuth mean  {:6.2} urad  std {:6.2} urad",
        o.azimuth_mean_rad / URAD,
        o.azimuth_std_rad / URAD
    );
    Ok(())
}
