//! Replicas of the 1 km run over a seed range, run in parallel.
//!
//! cargo run --release --example seed_ensemble

use fsolink::cli::{cmd_run_ensemble, ensemble_report, load_scenario};

fn main() -> fsolink::Result<()> {
    let s = load_scenario(format!(
        "{}/../../scenarios/1km_default.json",
        env!("CARGO_MANIFEST_DIR")
    ))?;
    let runs = cmd_run_ensemble(&s, 60.0, 1..=8)?;
    let e = ensemble_report(&runs)?;
    for r in &e.runs {
        println!(
            "seed {:2}  loss {:6.2} dB  throughput {:6.3} Gbps",
            r.seed,
            r.loss.mean.unwrap_or(f64::NAN),
            r.throughput.mean
        );
    }
    if let Some(l) = e.loss_mean_db {
        println!("across seeds: mean loss {:.2} dB, spread {:.3} dB", l.mean, l.std);
    }
    Ok(())
}
