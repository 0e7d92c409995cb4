use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::Axes;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sinusoid {
    pub amplitude_rad: f64,
    pub frequency_hz: f64,
    #[serde(default)]
    pub phase_rad: f64,
}

/// Disturbance on one axis: deterministic tones plus band-limited
/// Gaussian noise.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisDisturbance {
    #[serde(default)]
    pub sinusoids: Vec<Sinusoid>,
    #[serde(default)]
    pub noise_rms_rad: f64,
    #[serde(default)]
    pub noise_bandwidth_hz: f64,
}

impl AxisDisturbance {
    fn validate(&self, field: &str) -> Result<()> {
        for (i, s) in self.sinusoids.iter().enumerate() {
            if !(s.amplitude_rad >= 0.0 && s.amplitude_rad.is_finite()) {
                return Err(Error::validation(
                    format!("{field}.sinusoids[{i}].amplitude_rad"),
                    "must be finite and >= 0",
                ));
            }
            if !(s.frequency_hz > 0.0 && s.frequency_hz.is_finite()) {
                return Err(Error::validation(
                    format!("{field}.sinusoids[{i}].frequency_hz"),
                    "must be finite and > 0",
                ));
            }
            if !s.phase_rad.is_finite() {
                return Err(Error::validation(
                    format!("{field}.sinusoids[{i}].phase_rad"),
                    "must be finite",
                ));
            }
        }
        if !(self.noise_rms_rad >= 0.0 && self.noise_rms_rad.is_finite()) {
            return Err(Error::validation(
                format!("{field}.noise_rms_rad"),
                "must be finite and >= 0",
            ));
        }
        if !(self.noise_bandwidth_hz >= 0.0 && self.noise_bandwidth_hz.is_finite()) {
            return Err(Error::validation(
                format!("{field}.noise_bandwidth_hz"),
                "must be finite and >= 0",
            ));
        }
        Ok(())
    }

    fn tones(&self, t_s: f64) -> f64 {
        self.sinusoids
            .iter()
            .map(|s| s.amplitude_rad * (std::f64::consts::TAU * s.frequency_hz * t_s + s.phase_rad).sin())
            .sum()
    }
}

/// Angular vibration of the terminal's mounting base.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DisturbanceProfile {
    #[serde(default)]
    pub pitch: AxisDisturbance,
    #[serde(default)]
    pub azimuth: AxisDisturbance,
}

impl DisturbanceProfile {
    pub fn validate(&self, field: &str) -> Result<()> {
        self.pitch.validate(&format!("{field}.pitch"))?;
        self.azimuth.validate(&format!("{field}.azimuth"))
    }
}

/// Stateful sampler for a [`DisturbanceProfile`].
///
/// The noise term is white Gaussian noise through two cascaded first-order
/// low-pass sections with corner `noise_bandwidth_hz`, so its spectrum
/// falls off as 1/f⁴ above the corner. Both sections start from their joint
/// stationary distribution and the output rms equals `noise_rms_rad` when
/// sampled at a fixed step.
#[derive(Debug, Clone)]
pub struct Disturbance {
    profile: DisturbanceProfile,
    step_s: f64,
    noise: Option<(f64, [NoiseState; 2])>,
}

#[derive(Debug, Clone, Copy)]
struct NoiseState {
    inner: f64,
    outer: f64,
}

/// Pole of one section over `dt_s` and the inner-section rms giving an
/// output rms of `rms`.
fn section(axis: &AxisDisturbance, dt_s: f64) -> (f64, f64) {
    let a = (-std::f64::consts::TAU * axis.noise_bandwidth_hz * dt_s).exp();
    (a, axis.noise_rms_rad * (1.0 + a) / (1.0 + a * a).sqrt())
}

impl Disturbance {
    /// Sampler that will be called every `step_s` seconds.
    pub fn new(profile: DisturbanceProfile, step_s: f64) -> Self {
        Self {
            profile,
            step_s,
            noise: None,
        }
    }

    pub fn profile(&self) -> &DisturbanceProfile {
        &self.profile
    }

    /// Base attitude offset at `t_s`. Calls must use nondecreasing times.
    pub fn sample<R: Rng + ?Sized>(&mut self, t_s: f64, rng: &mut R) -> Axes {
        let p = &self.profile;
        let mut z = [0.0; 4];
        for v in &mut z {
            *v = rng.sample(StandardNormal);
        }
        let axes = [&p.pitch, &p.azimuth];
        let state = match self.noise {
            None => [0, 1].map(|i| {
                let (a, s1) = section(axes[i], self.step_s);
                let inner = s1 * z[2 * i];
                NoiseState {
                    inner,
                    outer: (inner + a * s1 * z[2 * i + 1]) / (1.0 + a),
                }
            }),
            Some((last_t, prev)) => {
                let dt = (t_s - last_t).max(0.0);
                [0, 1].map(|i| {
                    let (a, s1) = section(axes[i], dt);
                    let inner = a * prev[i].inner + (1.0 - a * a).sqrt() * s1 * z[2 * i];
                    NoiseState {
                        inner,
                        outer: a * prev[i].outer + (1.0 - a) * inner,
                    }
                })
            }
        };
        self.noise = Some((t_s, state));
        Axes::new(
            p.pitch.tones(t_s) + state[0].outer,
            p.azimuth.tones(t_s) + state[1].outer,
        )
    }
}

/// One-shot convenience wrapper around [`Disturbance::sample`] for a fresh
/// generator.
pub fn disturbance_sample<R: Rng + ?Sized>(profile: &DisturbanceProfile, t_s: f64, rng: &mut R) -> Axes {
    Disturbance::new(profile.clone(), 1e-3).sample(t_s, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, Stream};

    #[test]
    fn empty_profile_is_silent() {
        let mut rng = stream(1, Stream::Disturbance);
        let mut d = Disturbance::new(DisturbanceProfile::default(), 1e-3);
        for k in 0..100 {
            assert_eq!(d.sample(k as f64 * 1e-3, &mut rng), Axes::ZERO);
        }
    }

    #[test]
    fn quarter_period_reaches_amplitude() {
        let a = 50e-6;
        let f = 0.5;
        let profile = DisturbanceProfile {
            pitch: AxisDisturbance {
                sinusoids: vec![Sinusoid {
                    amplitude_rad: a,
                    frequency_hz: f,
                    phase_rad: 0.0,
                }],
                ..Default::default()
            },
            ..Default::default()
        };
        let mut rng = stream(1, Stream::Disturbance);
        let v = disturbance_sample(&profile, 1.0 / (4.0 * f), &mut rng);
        assert!((v.pitch - a).abs() < 1e-18);
        assert_eq!(v.azimuth, 0.0);
    }

    #[test]
    fn noise_rms_matches_configuration() {
        let rms = 20e-6;
        let axis = AxisDisturbance {
            sinusoids: vec![],
            noise_rms_rad: rms,
            noise_bandwidth_hz: 50.0,
        };
        let profile = DisturbanceProfile {
            pitch: axis.clone(),
            azimuth: axis,
        };
        let mut rng = stream(42, Stream::Disturbance);
        let mut d = Disturbance::new(profile, 1e-3);
        let n = 100_000;
        let (mut sp, mut sa, mut mp) = (0.0, 0.0, 0.0);
        for k in 0..n {
            let v = d.sample(k as f64 * 1e-3, &mut rng);
            sp += v.pitch * v.pitch;
            sa += v.azimuth * v.azimuth;
            mp += v.pitch;
        }
        let rp = (sp / n as f64).sqrt();
        let ra = (sa / n as f64).sqrt();
        assert!((rp / rms - 1.0).abs() < 0.05, "{rp}");
        assert!((ra / rms - 1.0).abs() < 0.05, "{ra}");
        assert!((mp / n as f64).abs() < 0.1 * rms);
    }

    #[test]
    fn rejects_nonpositive_frequency() {
        let profile = DisturbanceProfile {
            pitch: AxisDisturbance {
                sinusoids: vec![Sinusoid {
                    amplitude_rad: 1e-6,
                    frequency_hz: 0.0,
                    phase_rad: 0.0,
                }],
                ..Default::default()
            },
            ..Default::default()
        };
        let e = profile.validate("disturbance").unwrap_err();
        assert!(e.to_string().contains("disturbance.pitch.sinusoids[0].frequency_hz"));
    }
}
