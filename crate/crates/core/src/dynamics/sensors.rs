use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units::Axes;

/// Tracking beacon of the far terminal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeaconSpec {
    pub wavelength_m: f64,
    /// Full cone angle.
    pub full_divergence_rad: f64,
    pub power_w: f64,
}

impl BeaconSpec {
    pub fn validate(&self, field: &str) -> Result<()> {
        for (name, v) in [
            ("wavelength_m", self.wavelength_m),
            ("full_divergence_rad", self.full_divergence_rad),
            ("power_w", self.power_w),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::validation(format!("{field}.{name}"), "must be finite and > 0"));
            }
        }
        Ok(())
    }
}

/// True when the receiver sits inside the beacon cone. The edge counts as
/// inside.
pub fn beacon_visible(beacon: &BeaconSpec, transmitter_pointing_error_rad: f64) -> bool {
    transmitter_pointing_error_rad <= 0.5 * beacon.full_divergence_rad
}

/// Centroiding camera.
///
/// `fov_*` and `pixels_*` describe the sensor as listed on its datasheet.
/// A camera behind the telescope sees sky angles scaled by
/// `magnification`, so its field and pixel pitch on the sky shrink by that
/// factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CmosSpec {
    pub fov_pitch_rad: f64,
    pub fov_azimuth_rad: f64,
    #[serde(default = "default_pixels")]
    pub pixels_pitch: u32,
    #[serde(default = "default_pixels")]
    pub pixels_azimuth: u32,
    #[serde(default = "default_frame_rate")]
    pub frame_rate_hz: f64,
    /// Centroid noise rms on the sky, per axis.
    pub centroid_noise_rms_rad: f64,
    #[serde(default = "default_magnification")]
    pub magnification: f64,
}

fn default_pixels() -> u32 {
    288
}
fn default_frame_rate() -> f64 {
    1000.0
}
fn default_magnification() -> f64 {
    1.0
}

impl CmosSpec {
    /// Half field of view on the sky, per axis.
    pub fn half_fov(&self) -> Axes {
        Axes::new(self.fov_pitch_rad, self.fov_azimuth_rad) * (0.5 / self.magnification)
    }

    /// Angular size of one pixel on the sky, per axis.
    pub fn pixel_pitch(&self) -> Axes {
        Axes::new(
            self.fov_pitch_rad / self.pixels_pitch as f64,
            self.fov_azimuth_rad / self.pixels_azimuth as f64,
        ) * (1.0 / self.magnification)
    }

    pub fn in_fov(&self, offset: Axes) -> bool {
        let h = self.half_fov();
        offset.pitch.abs() <= h.pitch && offset.azimuth.abs() <= h.azimuth
    }

    pub fn validate(&self, field: &str) -> Result<()> {
        for (name, v) in [
            ("fov_pitch_rad", self.fov_pitch_rad),
            ("fov_azimuth_rad", self.fov_azimuth_rad),
            ("frame_rate_hz", self.frame_rate_hz),
            ("magnification", self.magnification),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::validation(format!("{field}.{name}"), "must be finite and > 0"));
            }
        }
        if self.pixels_pitch == 0 || self.pixels_azimuth == 0 {
            return Err(Error::validation(format!("{field}.pixels"), "must be > 0"));
        }
        if !(self.centroid_noise_rms_rad >= 0.0 && self.centroid_noise_rms_rad.is_finite()) {
            return Err(Error::validation(
                format!("{field}.centroid_noise_rms_rad"),
                "must be finite and >= 0",
            ));
        }
        Ok(())
    }
}

/// Centroid output of one camera frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensorFrame {
    pub timestamp_s: f64,
    pub offset_pitch_rad: f64,
    pub offset_azimuth_rad: f64,
    pub valid: bool,
}

impl SensorFrame {
    pub fn offset(&self) -> Axes {
        Axes::new(self.offset_pitch_rad, self.offset_azimuth_rad)
    }

    pub fn invalid(timestamp_s: f64) -> Self {
        Self {
            timestamp_s,
            offset_pitch_rad: 0.0,
            offset_azimuth_rad: 0.0,
            valid: false,
        }
    }
}

/// Measures the beacon spot offset.
///
/// The spot position is the true offset plus Gaussian centroid noise,
/// rounded half away from zero to the pixel grid. The frame is invalid when
/// the beacon is not seen or the spot lands outside the field of view.
/// Two normal deviates are drawn on every call.
pub fn cmos_measure<R: Rng + ?Sized>(
    spec: &CmosSpec,
    true_offset_pitch_rad: f64,
    true_offset_azimuth_rad: f64,
    beacon_seen: bool,
    t_s: f64,
    rng: &mut R,
) -> SensorFrame {
    let zp: f64 = rng.sample(StandardNormal);
    let za: f64 = rng.sample(StandardNormal);
    let truth = Axes::new(true_offset_pitch_rad, true_offset_azimuth_rad);
    if !beacon_seen || !spec.in_fov(truth) {
        return SensorFrame::invalid(t_s);
    }
    let noisy = truth + Axes::new(zp, za) * spec.centroid_noise_rms_rad;
    let measured = noisy.zip(spec.pixel_pitch(), |x, p| (x / p).round() * p);
    if !spec.in_fov(measured) {
        return SensorFrame::invalid(t_s);
    }
    SensorFrame {
        timestamp_s: t_s,
        offset_pitch_rad: measured.pitch,
        offset_azimuth_rad: measured.azimuth,
        valid: true,
    }
}

/// Gyro-style angular rate sensor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImuSpec {
    pub rate_noise_rms_rad_s: f64,
    pub sample_rate_hz: f64,
}

impl ImuSpec {
    pub fn validate(&self, field: &str) -> Result<()> {
        if !(self.rate_noise_rms_rad_s >= 0.0 && self.rate_noise_rms_rad_s.is_finite()) {
            return Err(Error::validation(
                format!("{field}.rate_noise_rms_rad_s"),
                "must be finite and >= 0",
            ));
        }
        if !(self.sample_rate_hz > 0.0 && self.sample_rate_hz.is_finite()) {
            return Err(Error::validation(
                format!("{field}.sample_rate_hz"),
                "must be finite and > 0",
            ));
        }
        Ok(())
    }
}

pub fn imu_measure<R: Rng + ?Sized>(spec: &ImuSpec, true_base_rate_rad_s: Axes, rng: &mut R) -> Axes {
    let z = Axes::new(rng.sample(StandardNormal), rng.sample(StandardNormal));
    true_base_rate_rad_s + z * spec.rate_noise_rms_rad_s
}
