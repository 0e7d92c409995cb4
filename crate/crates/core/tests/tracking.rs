mod common;

use common::{quiet, shipped, urad};
use fsolink::apt::{run_apt, tracking_stats, AptState, InitialState, StageMask};
use fsolink::dynamics::{AxisDisturbance, DisturbanceProfile, Sinusoid};
use fsolink::units::URAD;

#[test]
fn quiet_linked_start_has_no_error() {
    let mut s = quiet();
    s.apt.initial_state = InitialState::Linked;
    let cfg = s.tracking_config().unwrap();
    let series = run_apt(&cfg, 2.0, 5).unwrap();
    assert!(series.samples.iter().all(|x| x.state == AptState::Linked));
    assert!(series
        .samples
        .iter()
        .all(|x| x.error_pitch_rad == 0.0 && x.error_azimuth_rad == 0.0));
}

#[test]
fn quiet_scenario_reaches_linked_from_power_up() {
    let mut s = quiet();
    s.warmup_s = 0.0;
    let series = run_apt(&s.tracking_config().unwrap(), 3.0, 1).unwrap();
    assert_eq!(series.samples[0].state, AptState::Stabilize);
    let linked = series
        .samples
        .iter()
        .position(|x| x.state == AptState::Linked)
        .expect("never linked");
    // once linked the quiet loop stays there and the error dies out
    assert!(series.samples[linked..].iter().all(|x| x.state == AptState::Linked));
    // without noise the error settles inside the central pixel of CMOS2
    let half_pixel = s.cmos[2].pixel_pitch() * 0.5;
    let last = series.samples.last().unwrap();
    assert!(last.error_pitch_rad.abs() <= half_pixel.pitch, "{:?}", last.error());
    assert!(last.error_azimuth_rad.abs() <= half_pixel.azimuth, "{:?}", last.error());
}

#[test]
fn timestamps_step_at_one_millisecond() {
    let s = shipped("1km_default");
    let series = run_apt(&s.tracking_config().unwrap(), 0.5, 1).unwrap();
    assert_eq!(series.len(), 500);
    assert_eq!(series.sample_period_s, 1e-3);
    for (k, x) in series.samples.iter().enumerate() {
        assert_eq!(x.t_s, k as f64 * 1e-3);
        assert!(x.error_pitch_rad.is_finite() && x.error_azimuth_rad.is_finite());
    }
}

#[test]
fn runs_are_reproducible_per_seed() {
    let cfg = shipped("1km_default").tracking_config().unwrap();
    let a = run_apt(&cfg, 2.0, 7).unwrap();
    let b = run_apt(&cfg, 2.0, 7).unwrap();
    let c = run_apt(&cfg, 2.0, 8).unwrap();
    assert_eq!(a, b);
    assert_ne!(a.samples, c.samples);
}

#[test]
fn mirrors_stay_inside_their_range() {
    let mut s = shipped("1km_default");
    // base motion far beyond what the mirrors can absorb
    s.disturbance.pitch.noise_rms_rad = 2e-3;
    s.disturbance.pitch.noise_bandwidth_hz = 20.0;
    let series = run_apt(&s.tracking_config().unwrap(), 5.0, 3).unwrap();
    for x in &series.samples {
        for f in [x.fsm1, x.fsm2] {
            assert!(f.pitch.abs() <= 212e-6 && f.azimuth.abs() <= 212e-6);
        }
        assert!(x.gimbal.pitch.abs() <= std::f64::consts::FRAC_PI_3);
        assert!(x.gimbal.azimuth.abs() <= std::f64::consts::FRAC_PI_2);
    }
}

#[test]
fn coarse_only_never_engages_fine_loops() {
    let s = shipped("1km_coarse_only");
    let series = run_apt(&s.tracking_config().unwrap(), 5.0, 2).unwrap();
    assert!(series.samples.iter().all(|x| x.state == AptState::CoarseTrack));
    assert!(series
        .samples
        .iter()
        .all(|x| x.fsm1.norm() == 0.0 && x.fsm2.norm() == 0.0));
}

#[test]
fn fine_after_switches_loops_on_late() {
    let mut cfg = shipped("1km_default").tracking_config().unwrap();
    cfg.stages = StageMask {
        fine_after_s: Some(2.0),
        ..StageMask::default()
    };
    let series = run_apt(&cfg, 4.0, 2).unwrap();
    assert!(series.window(0.0, 2.0).iter().all(|x| x.state == AptState::CoarseTrack));
    assert!(series.window(3.0, 4.0).iter().all(|x| x.state == AptState::Linked));
    let before = tracking_stats(&series, (0.0, 2.0)).unwrap();
    let after = tracking_stats(&series, (3.0, 4.0)).unwrap();
    assert!(after.radial_mean_rad < 0.5 * before.radial_mean_rad);
}

/// A base rotating at a constant rate, built from a tone whose period is
/// far longer than the run.
fn constant_rate(rate_rad_s: f64) -> DisturbanceProfile {
    let f = 1e-4;
    let tone = |rate: f64, phase_rad: f64| AxisDisturbance {
        sinusoids: vec![Sinusoid {
            amplitude_rad: rate / (std::f64::consts::TAU * f),
            frequency_hz: f,
            phase_rad,
        }],
        ..Default::default()
    };
    DisturbanceProfile {
        pitch: tone(rate_rad_s, 0.0),
        azimuth: tone(0.5 * rate_rad_s, std::f64::consts::PI),
    }
}

#[test]
fn imu_feedforward_reduces_residual_under_base_rotation() {
    let mut s = shipped("1km_default");
    s.disturbance = constant_rate(1e-3);
    s.apt.stages = StageMask::coarse_only();
    // steady-state offset of the coarse loop, averaged over sensor noise
    let residual = |feedforward: bool| {
        let mut s = s.clone();
        s.apt.imu_feedforward = feedforward;
        let series = run_apt(&s.tracking_config().unwrap(), 20.0, 4).unwrap();
        let st = tracking_stats(&series, (5.0, 20.0)).unwrap();
        st.pitch_mean_rad.hypot(st.azimuth_mean_rad)
    };
    let without = residual(false);
    let with = residual(true);
    assert!(without > 30.0 * URAD, "without feedforward {:.2} urad", urad(without));
    assert!(with < 0.25 * without, "{:.2} vs {:.2} urad", urad(with), urad(without));
}

#[test]
fn invalid_configs_are_rejected() {
    let s = shipped("1km_default");
    let mut cfg = s.tracking_config().unwrap();
    cfg.cmos[1].magnification = 1.0;
    cfg.cmos[1].fov_pitch_rad = 0.05;
    assert!(run_apt(&cfg, 1.0, 1).unwrap_err().to_string().contains("cmos[1]"));

    let mut cfg = s.tracking_config().unwrap();
    cfg.fsm[0].range_rad = 0.03;
    assert!(run_apt(&cfg, 1.0, 1)
        .unwrap_err()
        .to_string()
        .contains("fsm[0].range_rad"));

    let cfg = s.tracking_config().unwrap();
    assert!(run_apt(&cfg, 0.0, 1).is_err());
    assert!(run_apt(&cfg, f64::NAN, 1).is_err());
}
