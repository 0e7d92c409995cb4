//! Four-kilometre link in haze: the atmosphere's share of the loss.
//!
//! cargo run --release --example fog_link

use fsolink::cli::{cmd_run, load_scenario};

fn main() -> fsolink::Result<()> {
    let s = load_scenario(format!("{}/../../scenarios/4km_fog.json", env!("CARGO_MANIFEST_DIR")))?;
    let run = cmd_run(&s, s.duration_s, s.seed)?;
    let d = run.report.distance_m;
    let b = s.optics().budget(d, 0.0);
    let visibility = s
        .atmosphere
        .visibility_m
        .map_or("clear air".into(), |v| format!("{v:.0} m"));
    println!("distance      {d:8.1} m, visibility {visibility}");
    println!("diffraction   {:6.2} dB", b.diffraction_db);
    println!("atmosphere    {:6.2} dB", b.atmosphere_db);
    println!("static total  {:6.2} dB", b.total_db);
    let l = run.report.loss;
    println!(
        "tracked loss  {:6.2} dB  std {:5.2} dB",
        l.mean.unwrap_or(f64::NAN),
        l.std.unwrap_or(f64::NAN)
    );
    println!(
        "throughput    {:6.3} Gbps, downtime {:.2} %",
        run.report.throughput.mean,
        100.0 * run.report.downtime_fraction
    );
    Ok(())
}
