//! Clear-air static loss against distance, written as CSV.
//!
//! cargo run --example diffraction_sweep > sweep.csv

use fsolink::cli::{cmd_sweep, load_scenario};

fn main() -> fsolink::Result<()> {
    let s = load_scenario(format!(
        "{}/../../scenarios/1km_default.json",
        env!("CARGO_MANIFEST_DIR")
    ))?;
    print!("{}", cmd_sweep(&s, 100.0, 10_000.0, 100, true)?);
    Ok(())
}
