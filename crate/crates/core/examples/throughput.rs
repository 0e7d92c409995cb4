//! Loss and throughput of a 100 s run at 1 km, next to the fixed-loss bench.
//!
//! cargo run --release --example throughput

use fsolink::cli::{cmd_run, load_scenario};

fn main() -> fsolink::Result<()> {
    let dir = format!("{}/../../scenarios", env!("CARGO_MANIFEST_DIR"));
    for name in ["1km_default", "bench_direct"] {
        let s = load_scenario(format!("{dir}/{name}.json"))?;
        let run = cmd_run(&s, 100.0, s.seed)?;
        let (l, t) = (run.report.loss, run.report.throughput);
        println!("{name}");
        println!(
            "  loss        {:6.2} dB  std {:5.2} dB  max {:6.2} dB",
            l.mean.unwrap_or(f64::NAN),
            l.std.unwrap_or(f64::NAN),
            l.max.unwrap_or(f64::NAN)
        );
        println!("  throughput  {:6.3} Gbps  std {:5.3} Gbps", t.mean, t.std);
        println!("  downtime    {:6.3} %", 100.0 * run.report.downtime_fraction);
    }
    Ok(())
}
