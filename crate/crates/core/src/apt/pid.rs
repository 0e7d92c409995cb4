use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::Axes;

/// Gains for one loop. The integrator state is clamped to
/// `±windup_limit` (units of error × seconds).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControllerGains {
    #[serde(default)]
    pub kp: f64,
    #[serde(default)]
    pub ki: f64,
    #[serde(default)]
    pub kd: f64,
    pub windup_limit: f64,
}

impl ControllerGains {
    pub fn validate(&self, field: &str) -> Result<()> {
        for (name, v) in [("kp", self.kp), ("ki", self.ki), ("kd", self.kd)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::validation(format!("{field}.{name}"), "must be finite and >= 0"));
            }
        }
        if !(self.windup_limit > 0.0 && self.windup_limit.is_finite()) {
            return Err(Error::validation(
                format!("{field}.windup_limit"),
                "must be finite and > 0",
            ));
        }
        Ok(())
    }
}

/// One discrete PID update.
///
/// Returns `(command, new_integrator, new_previous_error)`.
pub fn pid_step(
    gains: &ControllerGains,
    error_rad: f64,
    integrator_state: f64,
    previous_error: f64,
    dt_s: f64,
) -> (f64, f64, f64) {
    let lim = gains.windup_limit;
    let integrator = (integrator_state + error_rad * dt_s).clamp(-lim, lim);
    let derivative = (error_rad - previous_error) / dt_s;
    let command = gains.kp * error_rad + gains.ki * integrator + gains.kd * derivative;
    (command, integrator, error_rad)
}

/// Two-axis PID with its own state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pid {
    pub gains: ControllerGains,
    pub integrator: Axes,
    pub previous_error: Axes,
}

impl Pid {
    pub fn new(gains: ControllerGains) -> Self {
        Self {
            gains,
            integrator: Axes::ZERO,
            previous_error: Axes::ZERO,
        }
    }

    pub fn reset(&mut self) {
        self.integrator = Axes::ZERO;
        self.previous_error = Axes::ZERO;
    }

    pub fn step(&mut self, error: Axes, dt_s: f64) -> Axes {
        let (cp, ip, ep) = pid_step(
            &self.gains,
            error.pitch,
            self.integrator.pitch,
            self.previous_error.pitch,
            dt_s,
        );
        let (ca, ia, ea) = pid_step(
            &self.gains,
            error.azimuth,
            self.integrator.azimuth,
            self.previous_error.azimuth,
            dt_s,
        );
        self.integrator = Axes::new(ip, ia);
        self.previous_error = Axes::new(ep, ea);
        Axes::new(cp, ca)
    }

    /// Output with the current state and zero error.
    pub fn hold(&self) -> Axes {
        self.integrator * self.gains.ki
    }
}
