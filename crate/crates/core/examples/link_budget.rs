//! Static link budget term by term, plus the penalty of a pointing error.
//!
//! cargo run --example link_budget

use fsolink::cli::load_scenario;
use fsolink::units::URAD;

fn main() -> fsolink::Result<()> {
    let s = load_scenario(format!(
        "{}/../../scenarios/1km_default.json",
        env!("CARGO_MANIFEST_DIR")
    ))?;
    let optics = s.optics();
    println!(
        "{:>8} {:>8} {:>11} {:>8} {:>10} {:>8} {:>8}",
        "d_km", "err_urad", "diffraction", "optics", "atmosphere", "fiber", "total"
    );
    for d_km in [0.5, 1.0, 2.0, 4.0, 10.0] {
        for err_urad in [0.0, 3.0, 10.0] {
            let b = optics.budget(d_km * 1e3, err_urad * URAD);
            println!(
                "{d_km:8.1} {err_urad:8.1} {:11.3} {:8.3} {:10.3} {:8.3} {:8.3}",
                b.diffraction_db,
                b.optics_db,
                b.atmosphere_db,
                b.coupling_base_db + b.jitter_excess_db,
                b.total_db
            );
        }
    }
    Ok(())
}
