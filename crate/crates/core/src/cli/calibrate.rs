//! Fitting the two fiber-coupling parameters and the optics insertion loss
//! to measured mean losses.
//!
//! Each anchor pairs a pointing-jitter source with the mean end-to-end loss
//! observed for it. Given the mean jitter excess of two anchors, the
//! rolloff half-width is the value that reproduces their loss difference
//! (found by bisection); the base coupling loss then absorbs what remains.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::scenario::Scenario;
use crate::apt::{run_apt, StageMask};
use crate::error::{Error, Result};
use crate::optics::{diffraction_loss_db, jitter_excess_db, CouplingModel};
use crate::rng::{stream, Stream};
use crate::units::{mean_std, Axes};

/// Where the radial pointing errors of an anchor come from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum JitterSource {
    /// Independent zero-mean Gaussian error with this rms on each axis.
    Gaussian { sigma_rad: f64 },
    /// The scenario's own tracking simulation with these loops enabled.
    Simulated { stages: StageMask },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Anchor {
    pub jitter: JitterSource,
    pub distance_m: f64,
    pub mean_loss_db: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationTargets {
    /// Clear-air diffraction plus optics loss at 10 km. When set, the
    /// per-terminal insertion loss is solved from it first.
    #[serde(default)]
    pub static_10km_db: Option<f64>,
    pub anchors: Vec<Anchor>,
    #[serde(default = "default_tolerance")]
    pub tolerance_db: f64,
    /// Monte Carlo draws per Gaussian anchor.
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Recorded time per simulated anchor.
    #[serde(default = "default_sim_duration")]
    pub simulated_duration_s: f64,
}

fn default_tolerance() -> f64 {
    0.2
}

fn default_samples() -> usize {
    20_000
}

fn default_sim_duration() -> f64 {
    60.0
}

impl CalibrationTargets {
    pub fn validate(&self) -> Result<()> {
        if self.anchors.is_empty() {
            return Err(Error::validation("anchors", "at least one anchor is required"));
        }
        for (i, a) in self.anchors.iter().enumerate() {
            if !(a.distance_m >= 0.0 && a.distance_m.is_finite()) {
                return Err(Error::validation(
                    format!("anchors[{i}].distance_m"),
                    "must be finite and >= 0",
                ));
            }
            if !a.mean_loss_db.is_finite() {
                return Err(Error::validation(
                    format!("anchors[{i}].mean_loss_db"),
                    "must be finite",
                ));
            }
            if let JitterSource::Gaussian { sigma_rad } = a.jitter {
                if !(sigma_rad >= 0.0 && sigma_rad.is_finite()) {
                    return Err(Error::validation(
                        format!("anchors[{i}].jitter.gaussian.sigma_rad"),
                        "must be finite and >= 0",
                    ));
                }
            }
        }
        if !(self.tolerance_db > 0.0) {
            return Err(Error::validation("tolerance_db", "must be > 0"));
        }
        if self.samples == 0 {
            return Err(Error::validation("samples", "must be >= 1"));
        }
        if !(self.simulated_duration_s > 0.0 && self.simulated_duration_s.is_finite()) {
            return Err(Error::validation("simulated_duration_s", "must be finite and > 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnchorFit {
    pub target_db: f64,
    pub achieved_db: f64,
    pub residual_db: f64,
    /// Mean radial pointing error of the jitter sample.
    pub radial_mean_rad: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationReport {
    pub converged: bool,
    /// Why the fit failed; absent on success.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub insertion_loss_db: f64,
    pub coupling: CouplingModel,
    pub anchors: Vec<AnchorFit>,
}

impl CalibrationReport {
    /// Converts a failed fit into [`Error::NonConvergence`].
    pub fn into_result(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            let residuals: Vec<String> = self
                .anchors
                .iter()
                .map(|a| format!("{:+.3} dB", a.residual_db))
                .collect();
            Err(Error::NonConvergence(format!(
                "{}; anchor residuals [{}]",
                self.reason.as_deref().unwrap_or("anchors not met"),
                residuals.join(", ")
            )))
        }
    }

    /// `scenario` with the fitted parameters substituted.
    pub fn apply(&self, scenario: &Scenario) -> Scenario {
        let mut s = scenario.clone();
        s.antenna.insertion_loss_db = self.insertion_loss_db;
        s.coupling = self.coupling;
        s
    }
}

/// Radial pointing errors for one anchor.
fn jitter_sample(scenario: &Scenario, targets: &CalibrationTargets, source: JitterSource) -> Result<Vec<f64>> {
    match source {
        JitterSource::Gaussian { sigma_rad } => {
            let mut rng = stream(scenario.seed, Stream::Calibration);
            Ok((0..targets.samples)
                .map(|_| {
                    let p: f64 = rng.sample(StandardNormal);
                    let a: f64 = rng.sample(StandardNormal);
                    (Axes::new(p, a) * sigma_rad).norm()
                })
                .collect())
        }
        JitterSource::Simulated { stages } => {
            let mut cfg = scenario.tracking_config()?;
            cfg.stages = stages;
            let series = run_apt(&cfg, targets.simulated_duration_s, scenario.seed)?;
            let r: Vec<f64> = series
                .samples
                .iter()
                .filter(|s| s.state.is_tracking())
                .map(|s| s.radial_error())
                .collect();
            if r.is_empty() {
                return Err(Error::NonConvergence(
                    "simulated anchor never reached a tracking state".into(),
                ));
            }
            Ok(r)
        }
    }
}

fn mean_excess(cm: &CouplingModel, radial: &[f64]) -> f64 {
    mean_std(radial.iter().map(|&r| jitter_excess_db(cm, r))).map_or(0.0, |(m, _, _)| m)
}

const THETA_MIN_RAD: f64 = 1e-8;
const THETA_MAX_RAD: f64 = 1e-1;

/// Bisection for the root of a function that changes sign on
/// `[lo, hi]`, in log space.
fn bisect(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> Option<f64> {
    let (flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() || !flo.is_finite() || !fhi.is_finite() {
        return None;
    }
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        let fm = f(mid);
        if fm == 0.0 || hi / lo - 1.0 < 1e-13 {
            return Some(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some((lo * hi).sqrt())
}

/// Fits insertion loss, rolloff half-width and base coupling loss.
///
/// With one anchor only the base loss is fitted. With two or more the
/// first two fix the half-width and every anchor must then be met within
/// `tolerance_db`. A failed fit is reported with `converged = false`.
pub fn calibrate(scenario: &Scenario, targets: &CalibrationTargets) -> Result<CalibrationReport> {
    targets.validate()?;
    let beam = scenario.beam();
    let antenna = scenario.antenna;
    let mut report = CalibrationReport {
        converged: false,
        reason: None,
        insertion_loss_db: antenna.insertion_loss_db,
        coupling: scenario.coupling,
        anchors: Vec::new(),
    };

    if let Some(target) = targets.static_10km_db {
        let diffraction = diffraction_loss_db(&beam, &antenna, &antenna, 10_000.0);
        let per_terminal = 0.5 * (target - diffraction);
        if per_terminal < 0.0 {
            report.reason = Some(format!(
                "10 km static target {target} dB is below the diffraction loss alone ({diffraction:.3} dB)"
            ));
            return Ok(report);
        }
        report.insertion_loss_db = per_terminal;
    }

    let mut fitted = scenario.clone();
    fitted.antenna.insertion_loss_db = report.insertion_loss_db;
    let optics = fitted.optics();
    let samples: Vec<Vec<f64>> = targets
        .anchors
        .iter()
        .map(|a| jitter_sample(scenario, targets, a.jitter))
        .collect::<Result<_>>()?;
    // loss left for the coupling terms at each anchor
    let budget: Vec<f64> = targets
        .anchors
        .iter()
        .map(|a| {
            let b = optics.budget(a.distance_m, 0.0);
            a.mean_loss_db - (b.diffraction_db + b.optics_db + b.atmosphere_db)
        })
        .collect();

    let mut cm = scenario.coupling;
    if targets.anchors.len() >= 2 {
        let want = budget[1] - budget[0];
        let gap = |theta: f64| {
            let c = CouplingModel {
                rolloff_halfwidth_rad: theta,
                ..cm
            };
            mean_excess(&c, &samples[1]) - mean_excess(&c, &samples[0]) - want
        };
        match bisect(THETA_MIN_RAD, THETA_MAX_RAD, gap) {
            Some(theta) => cm.rolloff_halfwidth_rad = theta,
            None => {
                report.reason = Some(format!(
                    "no rolloff half-width in [{THETA_MIN_RAD:e}, {THETA_MAX_RAD:e}] rad reproduces the {want:.3} dB loss difference between the first two anchors"
                ));
            }
        }
    }
    let base = budget[0] - mean_excess(&cm, &samples[0]);
    if report.reason.is_none() && !(base > 0.0) {
        report.reason = Some(format!("fitted base coupling loss {base:.3} dB is not positive"));
    }
    if base > 0.0 {
        cm.base_coupling_loss_db = base;
    }
    report.coupling = cm;

    let ctx = crate::optics::OpticsContext { coupling: cm, ..optics };
    report.anchors = targets
        .anchors
        .iter()
        .zip(&samples)
        .map(|(a, r)| {
            let st = ctx.budget(a.distance_m, 0.0);
            let achieved = st.total_db - st.jitter_excess_db + mean_excess(&cm, r);
            AnchorFit {
                target_db: a.mean_loss_db,
                achieved_db: achieved,
                residual_db: achieved - a.mean_loss_db,
                radial_mean_rad: mean_std(r.iter().copied()).map_or(0.0, |(m, _, _)| m),
            }
        })
        .collect();
    if report.reason.is_none() {
        if let Some((i, worst)) = report
            .anchors
            .iter()
            .enumerate()
            .find(|(_, a)| a.residual_db.abs() > targets.tolerance_db)
        {
            report.reason = Some(format!(
                "anchor {i} misses its target by {:.3} dB (tolerance {} dB)",
                worst.residual_db, targets.tolerance_db
            ));
        }
    }
    report.converged = report.reason.is_none();
    Ok(report)
}

pub fn load_targets(path: impl AsRef<std::path::Path>) -> Result<CalibrationTargets> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let t: CalibrationTargets = serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
        line: e.line(),
        column: e.column(),
    })?;
    t.validate()?;
    Ok(t)
}
