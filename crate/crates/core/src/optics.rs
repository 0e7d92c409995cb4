//! Link-budget terms: Gaussian-beam diffraction, optics insertion loss,
//! visibility-based atmospheric attenuation and single-mode-fiber coupling.
//!
//! All losses are positive decibels. A [`LinkBudget`] is an additive
//! decomposition whose total is the plain sum of its five terms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::table::{fmt_g6, CsvWriter};
use crate::units::DB_PER_NEPER;

/// Reference wavelength of the visibility definition (550 nm).
const VISIBILITY_REFERENCE_M: f64 = 550e-9;
/// Koschmieder constant for a 2 % contrast threshold.
const KOSCHMIEDER: f64 = 3.912;

/// Telescope at one terminal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AntennaSpec {
    pub aperture_diameter_m: f64,
    pub magnification: f64,
    /// One-way transmission loss of this terminal's optics.
    pub insertion_loss_db: f64,
}

impl Default for AntennaSpec {
    fn default() -> Self {
        Self {
            aperture_diameter_m: 0.090,
            magnification: 10.0,
            insertion_loss_db: 2.18,
        }
    }
}

impl AntennaSpec {
    pub fn aperture_radius_m(&self) -> f64 {
        0.5 * self.aperture_diameter_m
    }

    pub fn validate(&self, field: &str) -> Result<()> {
        positive(self.aperture_diameter_m, &format!("{field}.aperture_diameter_m"))?;
        if !(self.magnification >= 1.0 && self.magnification.is_finite()) {
            return Err(Error::validation(
                format!("{field}.magnification"),
                "must be finite and >= 1",
            ));
        }
        non_negative(self.insertion_loss_db, &format!("{field}.insertion_loss_db"))
    }
}

/// Fundamental Gaussian signal beam leaving the transmit aperture.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamModel {
    pub wavelength_m: f64,
    /// 1/e² intensity radius at the transmit aperture.
    pub waist_radius_m: f64,
}

/// Default waist as a fraction of the aperture radius.
pub const DEFAULT_WAIST_RATIO: f64 = 0.71;

impl BeamModel {
    /// Beam at `wavelength_m` with the default waist for `tx`.
    pub fn for_aperture(wavelength_m: f64, tx: &AntennaSpec) -> Self {
        Self {
            wavelength_m,
            waist_radius_m: DEFAULT_WAIST_RATIO * tx.aperture_radius_m(),
        }
    }

    pub fn rayleigh_range_m(&self) -> f64 {
        std::f64::consts::PI * self.waist_radius_m * self.waist_radius_m / self.wavelength_m
    }

    /// 1/e² radius after propagating `distance_m`.
    pub fn radius_at(&self, distance_m: f64) -> f64 {
        let zr = self.rayleigh_range_m();
        self.waist_radius_m * (1.0 + (distance_m / zr).powi(2)).sqrt()
    }

    pub fn validate(&self, field: &str, tx: &AntennaSpec) -> Result<()> {
        positive(self.wavelength_m, &format!("{field}.wavelength_m"))?;
        positive(self.waist_radius_m, &format!("{field}.waist_radius_m"))?;
        if self.waist_radius_m > tx.aperture_radius_m() {
            return Err(Error::validation(
                format!("{field}.waist_radius_m"),
                "waist must not exceed the transmit aperture radius",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtmosphereModel {
    /// Meteorological visibility; `f64::INFINITY` means clear air.
    pub visibility_m: f64,
    pub wavelength_m: f64,
}

impl AtmosphereModel {
    pub fn clear(wavelength_m: f64) -> Self {
        Self {
            visibility_m: f64::INFINITY,
            wavelength_m,
        }
    }

    pub fn validate(&self, field: &str) -> Result<()> {
        if !(self.visibility_m > 0.0) {
            return Err(Error::validation(
                format!("{field}.visibility_m"),
                "visibility must be > 0",
            ));
        }
        positive(self.wavelength_m, &format!("{field}.wavelength_m"))
    }
}

/// Gaussian-overlap fiber coupling with a quadratic-in-dB rolloff.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingModel {
    /// Coupling loss with perfect pointing.
    pub base_coupling_loss_db: f64,
    /// Radial pointing error at which efficiency drops to 1/e of its peak.
    pub rolloff_halfwidth_rad: f64,
}

impl CouplingModel {
    pub fn validate(&self, field: &str) -> Result<()> {
        positive(self.base_coupling_loss_db, &format!("{field}.base_coupling_loss_db"))?;
        positive(self.rolloff_halfwidth_rad, &format!("{field}.rolloff_halfwidth_rad"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkBudget {
    pub diffraction_db: f64,
    pub optics_db: f64,
    pub atmosphere_db: f64,
    pub coupling_base_db: f64,
    pub jitter_excess_db: f64,
    pub total_db: f64,
}

impl LinkBudget {
    /// Everything except the pointing-jitter penalty.
    pub fn static_db(&self) -> f64 {
        self.total_db - self.jitter_excess_db
    }

    /// Free-space part only: diffraction, optics and atmosphere.
    pub fn free_space_db(&self) -> f64 {
        self.diffraction_db + self.optics_db + self.atmosphere_db
    }
}

/// Far-field 1/e² half-angle divergence, λ/(π w0).
pub fn far_field_divergence(beam: &BeamModel) -> f64 {
    beam.wavelength_m / (std::f64::consts::PI * beam.waist_radius_m)
}

/// Fraction of a centred Gaussian beam of 1/e² radius `w` that falls inside
/// a circular aperture of radius `a`.
pub fn captured_fraction(aperture_radius_m: f64, beam_radius_m: f64) -> f64 {
    let x = 2.0 * aperture_radius_m * aperture_radius_m / (beam_radius_m * beam_radius_m);
    -(-x).exp_m1()
}

/// Receive-aperture capture loss of the Gaussian beam after `distance_m`.
///
/// Zero distance is defined as lossless.
pub fn diffraction_loss_db(beam: &BeamModel, _tx: &AntennaSpec, rx: &AntennaSpec, distance_m: f64) -> f64 {
    if distance_m <= 0.0 {
        return 0.0;
    }
    let f = captured_fraction(rx.aperture_radius_m(), beam.radius_at(distance_m));
    -10.0 * f.log10()
}

/// Kim visibility exponent `q` for visibility in kilometres.
pub fn kim_exponent(visibility_km: f64) -> f64 {
    if visibility_km > 50.0 {
        1.6
    } else if visibility_km > 6.0 {
        1.3
    } else if visibility_km > 1.0 {
        0.16 * visibility_km + 0.34
    } else if visibility_km > 0.5 {
        visibility_km - 0.5
    } else {
        0.0
    }
}

/// Specific attenuation in dB/km from the Kim visibility model.
pub fn atmospheric_attenuation_db_per_km(atm: &AtmosphereModel) -> f64 {
    if atm.visibility_m.is_infinite() {
        return 0.0;
    }
    let v_km = atm.visibility_m / 1000.0;
    let q = kim_exponent(v_km);
    let beta = KOSCHMIEDER / v_km * (atm.wavelength_m / VISIBILITY_REFERENCE_M).powf(-q);
    DB_PER_NEPER * beta
}

pub fn atmospheric_loss_db(atm: &AtmosphereModel, distance_m: f64) -> f64 {
    atmospheric_attenuation_db_per_km(atm) * distance_m.max(0.0) / 1000.0
}

/// Fiber coupling loss at a radial pointing error.
pub fn coupling_loss_db(cm: &CouplingModel, radial_error_rad: f64) -> f64 {
    cm.base_coupling_loss_db + jitter_excess_db(cm, radial_error_rad)
}

/// Coupling penalty above the zero-error baseline.
pub fn jitter_excess_db(cm: &CouplingModel, radial_error_rad: f64) -> f64 {
    let r = radial_error_rad / cm.rolloff_halfwidth_rad;
    DB_PER_NEPER * r * r
}

/// The loss inputs that do not change from sample to sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpticsContext {
    pub beam: BeamModel,
    pub tx: AntennaSpec,
    pub rx: AntennaSpec,
    pub atmosphere: AtmosphereModel,
    pub coupling: CouplingModel,
}

impl OpticsContext {
    pub fn budget(&self, distance_m: f64, radial_error_rad: f64) -> LinkBudget {
        link_budget(
            &self.beam,
            &self.tx,
            &self.rx,
            &self.atmosphere,
            &self.coupling,
            distance_m,
            radial_error_rad,
        )
    }
}

pub fn link_budget(
    beam: &BeamModel,
    tx: &AntennaSpec,
    rx: &AntennaSpec,
    atm: &AtmosphereModel,
    cm: &CouplingModel,
    distance_m: f64,
    radial_error_rad: f64,
) -> LinkBudget {
    let diffraction_db = diffraction_loss_db(beam, tx, rx, distance_m);
    let optics_db = tx.insertion_loss_db + rx.insertion_loss_db;
    let atmosphere_db = atmospheric_loss_db(atm, distance_m);
    let coupling_base_db = cm.base_coupling_loss_db;
    let jitter_excess_db = jitter_excess_db(cm, radial_error_rad);
    LinkBudget {
        diffraction_db,
        optics_db,
        atmosphere_db,
        coupling_base_db,
        jitter_excess_db,
        total_db: diffraction_db + optics_db + atmosphere_db + coupling_base_db + jitter_excess_db,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub distance_m: f64,
    pub diffraction_db: f64,
    /// Diffraction + optics + atmosphere. Fiber coupling is not included.
    pub total_static_db: f64,
}

pub const SWEEP_HEADER: [&str; 3] = ["distance_m", "diffraction_db", "total_static_db"];

/// Free-space loss on an evenly spaced distance grid, endpoints included.
pub fn distance_sweep(
    beam: &BeamModel,
    tx: &AntennaSpec,
    rx: &AntennaSpec,
    atm: &AtmosphereModel,
    cm: &CouplingModel,
    d_min: f64,
    d_max: f64,
    steps: usize,
) -> Result<Vec<SweepRow>> {
    if !(d_min >= 0.0 && d_min < d_max && d_max.is_finite()) {
        return Err(Error::InvalidRange(format!(
            "need 0 <= d_min < d_max, got [{d_min}, {d_max}]"
        )));
    }
    if steps < 2 {
        return Err(Error::InvalidRange(format!("need at least 2 steps, got {steps}")));
    }
    let span = d_max - d_min;
    Ok((0..steps)
        .map(|i| {
            let distance_m = if i + 1 == steps {
                d_max
            } else {
                d_min + span * i as f64 / (steps - 1) as f64
            };
            let b = link_budget(beam, tx, rx, atm, cm, distance_m, 0.0);
            SweepRow {
                distance_m,
                diffraction_db: b.diffraction_db,
                total_static_db: b.free_space_db(),
            }
        })
        .collect())
}

pub fn sweep_to_csv(rows: &[SweepRow]) -> String {
    let mut w = CsvWriter::with_header(&SWEEP_HEADER);
    for r in rows {
        w.row([
            fmt_g6(r.distance_m),
            fmt_g6(r.diffraction_db),
            fmt_g6(r.total_static_db),
        ]);
    }
    w.finish()
}

fn positive(v: f64, field: &str) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::validation(field, "must be finite and > 0"))
    }
}

fn non_negative(v: f64, field: &str) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::validation(field, "must be finite and >= 0"))
    }
}
