#![allow(dead_code)]

use std::path::PathBuf;

use fsolink::cli::{load_scenario, Scenario};
use fsolink::dynamics::DisturbanceProfile;
use fsolink::units::URAD;

pub fn scenario_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenarios")
        .join(format!("{name}.json"))
}

pub fn shipped(name: &str) -> Scenario {
    load_scenario(scenario_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

/// The default scenario with every noise source and the base motion
/// removed.
pub fn quiet() -> Scenario {
    let mut s = shipped("1km_default");
    s.disturbance = DisturbanceProfile::default();
    for c in &mut s.cmos {
        c.centroid_noise_rms_rad = 0.0;
    }
    s.imu.rate_noise_rms_rad_s = 0.0;
    s
}

pub fn urad(x: f64) -> f64 {
    x / URAD
}
