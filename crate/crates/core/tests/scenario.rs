mod common;

use std::path::Path;

use common::{scenario_path, shipped};
use fsolink::cli::{load_scenario, Scenario};
use fsolink::Error;

/// Straight-line distance from an independent ellipsoid evaluation.
fn chord_m(a: (f64, f64, f64), b: (f64, f64, f64)) -> f64 {
    let ecef = |(lat, lon, h): (f64, f64, f64)| {
        let a_m = 6378137.0;
        let f = 1.0 / 298.257223563;
        let e2 = 2.0 * f - f * f;
        let (lat, lon) = (lat.to_radians(), lon.to_radians());
        let n = a_m / (1.0 - e2 * lat.sin().powi(2)).sqrt();
        [
            (n + h) * lat.cos() * lon.cos(),
            (n + h) * lat.cos() * lon.sin(),
            (n * (1.0 - e2) + h) * lat.sin(),
        ]
    };
    let (p, q) = (ecef(a), ecef(b));
    ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2)).sqrt()
}

fn site(s: &Scenario) -> ((f64, f64, f64), (f64, f64, f64)) {
    let a = s.node_a;
    let b = s.node_b;
    (
        (a.latitude_deg, a.longitude_deg, a.altitude_m),
        (b.latitude_deg, b.longitude_deg, b.altitude_m),
    )
}

fn parse(text: &str) -> Result<Scenario, Error> {
    Scenario::from_json(text, Path::new("inline.json"))
}

const MINIMAL: &str = r#"{
  "schema_version": 1,
  "name": "minimal",
  "node_a": {"latitude_deg": 32.12, "longitude_deg": 118.95, "altitude_m": 50.0, "heading_deg": 60.0},
  "node_b": {"latitude_deg": 32.12451, "longitude_deg": 118.959185, "altitude_m": 52.0}
}"#;

#[test]
fn shipped_scenarios_load() {
    for name in ["1km_default", "1km_coarse_only", "1km_quiet", "4km_fog", "bench_direct"] {
        let s = shipped(name);
        assert_eq!(s.name, name);
    }
}

#[test]
fn shipped_distances() {
    let s = shipped("1km_default");
    let (a, b) = site(&s);
    let oracle = chord_m(a, b);
    assert!((oracle - 1000.0).abs() < 5.0, "{oracle}");
    assert!((s.distance_m().unwrap() - oracle).abs() < 1e-6);

    let s = shipped("4km_fog");
    let (a, b) = site(&s);
    let oracle = chord_m(a, b);
    assert!((oracle - 4000.0).abs() < 20.0, "{oracle}");
    assert!((s.distance_m().unwrap() - oracle).abs() < 1e-6);
    assert_eq!(s.atmosphere.visibility_m, Some(5000.0));
}

#[test]
fn omitted_sections_take_the_defaults() {
    let s = parse(MINIMAL).unwrap();
    let d = shipped("1km_default");
    assert_eq!(s.cmos, d.cmos);
    assert_eq!(s.fsm, d.fsm);
    assert_eq!(s.gains, d.gains);
    assert_eq!(s.coupling, d.coupling);
    assert_eq!(s.antenna, d.antenna);
    assert_eq!(s.disturbance, d.disturbance);
    assert_eq!(s.atmosphere.visibility_m, None);
    assert_eq!(s.optics().atmosphere.visibility_m, f64::INFINITY);
}

#[test]
fn json_round_trip() {
    let s = shipped("4km_fog");
    assert_eq!(parse(&s.to_json()).unwrap(), s);
}

#[test]
fn mirror_range_is_configuration() {
    let mut v: serde_json::Value = serde_json::from_str(MINIMAL).unwrap();
    v["description"] = "wider mirror".into();
    v["fsm"] = serde_json::json!([
        {"range_rad": 500e-6, "bandwidth_hz": 300.0},
        {"range_rad": 500e-6, "bandwidth_hz": 600.0}
    ]);
    let s = parse(&v.to_string()).unwrap();
    assert_eq!(s.fsm[0].range_rad, 500e-6);
}

#[test]
fn negative_visibility_names_the_field() {
    let mut v: serde_json::Value = serde_json::from_str(MINIMAL).unwrap();
    v["atmosphere"] = serde_json::json!({"visibility_m": -3.0});
    match parse(&v.to_string()) {
        Err(Error::Validation { field, .. }) => assert_eq!(field, "atmosphere.visibility_m"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn unknown_keys_are_rejected_with_a_position() {
    let text = MINIMAL.replace("\"name\": \"minimal\",", "\"name\": \"minimal\",\n  \"sede\": 4,");
    match parse(&text) {
        Err(e @ Error::Parse { .. }) => {
            let Error::Parse { line, message, .. } = &e else {
                unreachable!()
            };
            assert_eq!(*line, 4);
            assert!(message.contains("sede"), "{message}");
            assert_eq!(e.exit_code(), 1);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn syntax_errors_carry_line_and_column() {
    let text = "{\n  \"schema_version\": 1,\n  \"name\": oops\n}";
    match parse(text) {
        Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (3, 11)),
        other => panic!("{other:?}"),
    }
}

#[test]
fn wrong_schema_version() {
    let text = MINIMAL.replace("\"schema_version\": 1", "\"schema_version\": 2");
    assert!(matches!(parse(&text), Err(Error::Validation { field, .. }) if field == "schema_version"));
}

#[test]
fn cross_checks() {
    let mut s = shipped("1km_default");
    s.cmos[2].magnification = 0.1;
    assert!(matches!(s.validate(), Err(Error::Validation { field, .. }) if field == "cmos[2]"));

    let mut s = shipped("1km_default");
    s.fsm[1].range_rad = 0.5;
    assert!(s.validate().is_err());

    let mut s = shipped("1km_default");
    s.node_a.heading_deg = 180.0;
    let e = s.validate().unwrap_err();
    assert!(e.to_string().contains("gimbal"), "{e}");
}

#[test]
fn missing_file_is_an_io_error() {
    let e = load_scenario(scenario_path("does_not_exist")).unwrap_err();
    assert_eq!(e.exit_code(), 3);
}
