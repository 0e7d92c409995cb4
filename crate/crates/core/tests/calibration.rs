mod common;

use common::{scenario_path, shipped};
use fsolink::apt::StageMask;
use fsolink::cli::{calibrate, load_targets, Anchor, CalibrationTargets, JitterSource};
use fsolink::optics::diffraction_loss_db;
use fsolink::units::DB_PER_NEPER;
use fsolink::Error;

fn gaussian(sigma_rad: f64, mean_loss_db: f64) -> Anchor {
    Anchor {
        jitter: JitterSource::Gaussian { sigma_rad },
        distance_m: 1000.0,
        mean_loss_db,
    }
}

fn targets(anchors: Vec<Anchor>) -> CalibrationTargets {
    CalibrationTargets {
        static_10km_db: None,
        anchors,
        tolerance_db: 0.2,
        samples: 40_000,
        simulated_duration_s: 30.0,
    }
}

#[test]
fn published_anchors_give_a_rolloff_near_the_analytic_seed() {
    let s = shipped("1km_default");
    let r = calibrate(&s, &targets(vec![gaussian(3e-6, 13.7), gaussian(24e-6, 29.3)])).unwrap();
    assert!(r.converged, "{r:?}");
    let theta = r.coupling.rolloff_halfwidth_rad;
    assert!((10e-6..=30e-6).contains(&theta), "{theta}");
    // E[r^2] = 2 sigma^2 for two independent Gaussian axes
    let seed = (DB_PER_NEPER * 2.0 * (24e-6f64.powi(2) - 3e-6f64.powi(2)) / (29.3 - 13.7)).sqrt();
    assert!((seed - 17.8e-6).abs() < 0.1e-6);
    assert!((theta / seed - 1.0).abs() < 0.03, "{theta} vs {seed}");
    for a in &r.anchors {
        assert!(a.residual_db.abs() <= 0.2);
    }
}

#[test]
fn satisfied_anchors_are_a_fixed_point() {
    let s = shipped("1km_default");
    // anchors generated by the current parameters themselves
    let probe = calibrate(&s, &targets(vec![gaussian(3e-6, 0.0), gaussian(12e-6, 0.0)])).unwrap();
    let achieved: Vec<f64> = probe.anchors.iter().map(|a| a.achieved_db).collect();
    let spec = targets(vec![gaussian(3e-6, achieved[0]), gaussian(12e-6, achieved[1])]);
    let r = calibrate(&s, &spec).unwrap();
    assert!(r.converged);
    assert!((r.coupling.base_coupling_loss_db - s.coupling.base_coupling_loss_db).abs() < 1e-6);
    assert!((r.coupling.rolloff_halfwidth_rad / s.coupling.rolloff_halfwidth_rad - 1.0).abs() < 1e-6);
    assert_eq!(r.insertion_loss_db, s.antenna.insertion_loss_db);
}

#[test]
fn contradictory_anchors_do_not_converge() {
    let s = shipped("1km_default");
    let r = calibrate(&s, &targets(vec![gaussian(5e-6, 14.0), gaussian(5e-6, 20.0)])).unwrap();
    assert!(!r.converged);
    assert!(r.reason.is_some());
    let e = r.into_result().unwrap_err();
    assert!(matches!(e, Error::NonConvergence(_)));
    assert_eq!(e.exit_code(), 2);
}

#[test]
fn static_anchor_sets_the_insertion_loss() {
    let s = shipped("1km_default");
    let mut t = targets(vec![gaussian(3e-6, 13.7)]);
    t.static_10km_db = Some(12.0);
    let r = calibrate(&s, &t).unwrap();
    assert!(r.converged);
    let d = diffraction_loss_db(&s.beam(), &s.antenna, &s.antenna, 10_000.0);
    assert!((d + 2.0 * r.insertion_loss_db - 12.0).abs() < 1e-12);
    // a single anchor keeps the rolloff and fits the base only
    assert_eq!(r.coupling.rolloff_halfwidth_rad, s.coupling.rolloff_halfwidth_rad);
    assert!(r.anchors[0].residual_db.abs() < 1e-9);

    t.static_10km_db = Some(1.0);
    assert!(!calibrate(&s, &t).unwrap().converged);
}

#[test]
fn shipped_parameters_meet_the_shipped_anchors() {
    let s = shipped("1km_default");
    let t = load_targets(scenario_path("calibration_anchors")).unwrap();
    let r = calibrate(&s, &t).unwrap();
    assert!(r.converged, "{r:?}");
    assert!((r.insertion_loss_db - s.antenna.insertion_loss_db).abs() < 0.01);
    assert!((r.coupling.base_coupling_loss_db - s.coupling.base_coupling_loss_db).abs() < 0.1);
    assert!((r.coupling.rolloff_halfwidth_rad / s.coupling.rolloff_halfwidth_rad - 1.0).abs() < 0.02);
}

#[test]
fn simulated_anchor_needs_a_tracking_state() {
    let mut s = shipped("1km_default");
    s.warmup_s = 0.0;
    s.apt.stabilize_frames = 1_000_000;
    let t = targets(vec![Anchor {
        jitter: JitterSource::Simulated {
            stages: StageMask::default(),
        },
        distance_m: 1000.0,
        mean_loss_db: 13.7,
    }]);
    assert!(matches!(calibrate(&s, &t), Err(Error::NonConvergence(_))));
}

#[test]
fn targets_are_validated() {
    let s = shipped("1km_default");
    assert!(calibrate(&s, &targets(vec![])).is_err());
    let mut t = targets(vec![gaussian(-1.0, 13.0)]);
    assert!(calibrate(&s, &t).is_err());
    t.anchors = vec![gaussian(1e-6, 13.0)];
    t.samples = 0;
    assert!(calibrate(&s, &t).is_err());
}
