//! Fit insertion and fiber-coupling losses to measured anchor losses.
//!
//! cargo run --release --example calibration

use fsolink::cli::{calibrate, load_scenario, load_targets, to_json};

fn main() -> fsolink::Result<()> {
    let dir = format!("{}/../../scenarios", env!("CARGO_MANIFEST_DIR"));
    let s = load_scenario(format!("{dir}/1km_default.json"))?;
    let targets = load_targets(format!("{dir}/calibration_anchors.json"))?;
    let report = calibrate(&s, &targets)?;
    print!("{}", to_json(&report));
    let fitted = report.into_result()?.apply(&s);
    println!(
        "fitted: insertion {:.3} dB per terminal, base coupling {:.3} dB, rolloff {:.3} urad",
        fitted.antenna.insertion_loss_db,
        fitted.coupling.base_coupling_loss_db,
        fitted.coupling.rolloff_halfwidth_rad * 1e6
    );
    Ok(())
}
