use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

use serde::{Deserialize, Serialize};

use super::lag_fraction;
use crate::error::{Error, Result};
use crate::units::Axes;

/// Two-axis motorized gimbal (roll held fixed).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GimbalSpec {
    /// Symmetric azimuth travel, ±90° on the shipped hardware.
    pub azimuth_range_rad: f64,
    /// Symmetric pitch travel, ±60° on the shipped hardware.
    pub pitch_range_rad: f64,
    pub max_rate_rad_s: f64,
    pub bandwidth_hz: f64,
}

impl Default for GimbalSpec {
    fn default() -> Self {
        Self {
            azimuth_range_rad: FRAC_PI_2,
            pitch_range_rad: FRAC_PI_3,
            max_rate_rad_s: 1.0,
            bandwidth_hz: 20.0,
        }
    }
}

impl GimbalSpec {
    pub fn validate(&self, field: &str) -> Result<()> {
        for (name, v) in [
            ("azimuth_range_rad", self.azimuth_range_rad),
            ("pitch_range_rad", self.pitch_range_rad),
            ("max_rate_rad_s", self.max_rate_rad_s),
            ("bandwidth_hz", self.bandwidth_hz),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::validation(format!("{field}.{name}"), "must be finite and > 0"));
            }
        }
        Ok(())
    }

    fn limits(&self) -> Axes {
        Axes::new(self.pitch_range_rad, self.azimuth_range_rad)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct GimbalState {
    pub angles: Axes,
    pub rates: Axes,
}

/// Advances the gimbal one step: first-order lag toward `command`, slew
/// rate limited, travel limited.
pub fn gimbal_step(state: &GimbalState, spec: &GimbalSpec, command: Axes, dt_s: f64) -> GimbalState {
    let k = lag_fraction(spec.bandwidth_hz, dt_s);
    let max_step = spec.max_rate_rad_s * dt_s;
    let limits = spec.limits();
    let target = command.zip(limits, |c, l| c.clamp(-l, l));
    let step = (target - state.angles).map(|gap| (gap * k).clamp(-max_step, max_step));
    let angles = (state.angles + step).zip(limits, |a, l| a.clamp(-l, l));
    GimbalState {
        angles,
        rates: (angles - state.angles) * (1.0 / dt_s),
    }
}

/// Fast steering mirror; `range_rad` is the symmetric per-axis deflection
/// limit (±212 µrad on the shipped hardware).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FsmSpec {
    pub range_rad: f64,
    pub bandwidth_hz: f64,
}

impl FsmSpec {
    pub fn with_bandwidth(bandwidth_hz: f64) -> Self {
        Self {
            range_rad: 212e-6,
            bandwidth_hz,
        }
    }

    pub fn validate(&self, field: &str) -> Result<()> {
        if !(self.range_rad > 0.0 && self.range_rad.is_finite()) {
            return Err(Error::validation(
                format!("{field}.range_rad"),
                "must be finite and > 0",
            ));
        }
        if !(self.bandwidth_hz > 0.0 && self.bandwidth_hz.is_finite()) {
            return Err(Error::validation(
                format!("{field}.bandwidth_hz"),
                "must be finite and > 0",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FsmState {
    pub deflection: Axes,
}

pub fn fsm_step(state: &FsmState, spec: &FsmSpec, command: Axes, dt_s: f64) -> FsmState {
    let k = lag_fraction(spec.bandwidth_hz, dt_s);
    let r = spec.range_rad;
    let target = command.map(|c| c.clamp(-r, r));
    let deflection = (state.deflection + (target - state.deflection) * k).map(|d| d.clamp(-r, r));
    FsmState { deflection }
}
