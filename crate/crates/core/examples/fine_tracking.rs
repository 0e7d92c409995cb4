//! Coarse tracking for 30 s, then both mirror loops close.
//!
//! cargo run --release --example fine_tracking

use fsolink::apt::StageMask;
use fsolink::cli::{cmd_track, load_scenario};
use fsolink::units::URAD;

fn main() -> fsolink::Result<()> {
    let s = load_scenario(format!(
        "{}/../../scenarios/1km_default.json",
        env!("CARGO_MANIFEST_DIR")
    ))?;
    let stages = StageMask {
        fine_after_s: Some(30.0),
        ..StageMask::default()
    };
    let (series, report) = cmd_track(&s, 90.0, s.seed, stages)?;
    for (label, w) in [("0-30 s", report.before_fine), ("30-90 s", report.after_fine)] {
        let w = w.expect("split inside the run");
        println!(
            "{label:8} radial {:6.2} urad, std pitch {:5.2} / azimuth {:5.2} urad",
            w.radial_mean_rad / URAD,
            w.pitch_std_rad / URAD,
            w.azimuth_std_rad / URAD
        );
    }
    // one-second means show the step at the handover
    for second in 27..34 {
        let w = series.window(second as f64, second as f64 + 1.0);
        let r = w.iter().map(|x| x.radial_error()).sum::<f64>() / w.len() as f64;
        println!(
            "t = {second:2} s  {:6.2} urad  {}",
            r / URAD,
            w.last().map_or("", |x| x.state.name())
        );
    }
    Ok(())
}
