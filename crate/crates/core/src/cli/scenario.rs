//! Scenario files: one JSON document describing both terminals, the path
//! between them and every tunable of the tracking stack.
//!
//! Every section except the two node positions may be omitted and falls
//! back to the hardware defaults below. Unknown keys are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::apt::{ControllerGains, InitialState, LoopGains, StageMask, TrackingConfig, TransitionConfig};
use crate::dynamics::{
    AxisDisturbance, BeaconSpec, CmosSpec, DisturbanceProfile, FsmSpec, GimbalSpec, ImuSpec, Sinusoid,
};
use crate::error::{Error, Result};
use crate::geometry::{pointing_solution, slant_range_m, wrap_pi, GeodeticPosition};
use crate::link::TransceiverSpec;
use crate::optics::{AntennaSpec, AtmosphereModel, BeamModel, CouplingModel, OpticsContext, DEFAULT_WAIST_RATIO};
use crate::units::Axes;

pub const SCHEMA_VERSION: u32 = 1;

/// Terminal location and mount orientation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Site {
    pub latitude_deg: f64,
    pub longitude_deg: f64,
    /// Height above the WGS-84 ellipsoid.
    pub altitude_m: f64,
    /// Azimuth of the gimbal zero position, clockwise from true north.
    #[serde(default)]
    pub heading_deg: f64,
}

impl Site {
    pub fn position(&self, field: &str) -> Result<GeodeticPosition> {
        let pos = GeodeticPosition {
            latitude_rad: self.latitude_deg.to_radians(),
            longitude_rad: self.longitude_deg.to_radians(),
            altitude_m: self.altitude_m,
        };
        pos.validate(field)?;
        if !self.heading_deg.is_finite() {
            return Err(Error::validation(format!("{field}.heading_deg"), "must be finite"));
        }
        Ok(pos)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeamSection {
    pub wavelength_m: f64,
    /// Transmit waist as a fraction of the aperture radius.
    pub waist_ratio: f64,
}

impl Default for BeamSection {
    fn default() -> Self {
        Self {
            wavelength_m: 1550e-9,
            waist_ratio: DEFAULT_WAIST_RATIO,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtmosphereSection {
    /// Meteorological visibility; `null` or absent means clear air.
    #[serde(default)]
    pub visibility_m: Option<f64>,
}

/// Tunables of the tracking stack that are not hardware.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AptSection {
    pub acquisition_bias_rad: f64,
    pub imu_feedforward: bool,
    pub stabilization_leak_s: Option<f64>,
    pub stabilize_frames: u32,
    pub capture_threshold_rad: f64,
    pub link_threshold_rad: f64,
    pub link_dwell_frames: u32,
    pub lock_loss_frames: u32,
    pub stages: StageMask,
    pub initial_state: InitialState,
}

impl Default for AptSection {
    fn default() -> Self {
        let t = TransitionConfig::default();
        Self {
            acquisition_bias_rad: 2e-3,
            imu_feedforward: true,
            stabilization_leak_s: None,
            stabilize_frames: t.stabilize_frames,
            capture_threshold_rad: t.capture_threshold_rad,
            link_threshold_rad: t.link_threshold_rad,
            link_dwell_frames: t.link_dwell_frames,
            lock_loss_frames: t.lock_loss_frames,
            stages: StageMask::default(),
            initial_state: InitialState::Stabilize,
        }
    }
}

impl AptSection {
    pub fn transitions(&self) -> TransitionConfig {
        TransitionConfig {
            stabilize_frames: self.stabilize_frames,
            capture_threshold_rad: self.capture_threshold_rad,
            link_threshold_rad: self.link_threshold_rad,
            link_dwell_frames: self.link_dwell_frames,
            lock_loss_frames: self.lock_loss_frames,
        }
    }
}

/// Back-to-back test through a fixed attenuator: no optics, no tracking.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchSection {
    pub attenuation_db: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub schema_version: u32,
    pub name: String,
    /// Free text, ignored by the simulator.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_duration")]
    pub duration_s: f64,
    #[serde(default = "default_warmup")]
    pub warmup_s: f64,
    /// The simulated terminal.
    pub node_a: Site,
    /// The far terminal.
    pub node_b: Site,
    #[serde(default)]
    pub antenna: AntennaSpec,
    #[serde(default)]
    pub beam: BeamSection,
    #[serde(default)]
    pub atmosphere: AtmosphereSection,
    #[serde(default = "default_coupling")]
    pub coupling: CouplingModel,
    #[serde(default)]
    pub transceiver: TransceiverSpec,
    /// BL0, BL1, BL2 of the far terminal.
    #[serde(default = "default_beacons")]
    pub beacons: [BeaconSpec; 3],
    /// CMOS0, CMOS1, CMOS2.
    #[serde(default = "default_cmos")]
    pub cmos: [CmosSpec; 3],
    #[serde(default)]
    pub gimbal: GimbalSpec,
    /// FSM1, FSM2.
    #[serde(default = "default_fsm")]
    pub fsm: [FsmSpec; 2],
    #[serde(default = "default_imu")]
    pub imu: ImuSpec,
    #[serde(default = "default_disturbance")]
    pub disturbance: DisturbanceProfile,
    #[serde(default = "default_gains")]
    pub gains: LoopGains,
    #[serde(default)]
    pub apt: AptSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bench: Option<BenchSection>,
}

fn default_duration() -> f64 {
    120.0
}

fn default_warmup() -> f64 {
    5.0
}

pub fn default_coupling() -> CouplingModel {
    CouplingModel {
        base_coupling_loss_db: 6.97,
        rolloff_halfwidth_rad: 6.29e-6,
    }
}

pub fn default_beacons() -> [BeaconSpec; 3] {
    [
        BeaconSpec {
            wavelength_m: 940e-9,
            full_divergence_rad: 35e-3,
            power_w: 1.0,
        },
        BeaconSpec {
            wavelength_m: 638e-9,
            full_divergence_rad: 6e-3,
            power_w: 5e-3,
        },
        BeaconSpec {
            wavelength_m: 808e-9,
            full_divergence_rad: 6e-3,
            power_w: 5e-3,
        },
    ]
}

pub fn default_cmos() -> [CmosSpec; 3] {
    let fine = |noise: f64| CmosSpec {
        fov_pitch_rad: 13e-3,
        fov_azimuth_rad: 10e-3,
        pixels_pitch: 288,
        pixels_azimuth: 288,
        frame_rate_hz: 1000.0,
        centroid_noise_rms_rad: noise,
        magnification: 10.0,
    };
    [
        CmosSpec {
            fov_pitch_rad: 0.04,
            fov_azimuth_rad: 0.04,
            pixels_pitch: 288,
            pixels_azimuth: 288,
            frame_rate_hz: 1000.0,
            centroid_noise_rms_rad: 210e-6,
            magnification: 1.0,
        },
        fine(20e-6),
        fine(2e-6),
    ]
}

pub fn default_fsm() -> [FsmSpec; 2] {
    [FsmSpec::with_bandwidth(300.0), FsmSpec::with_bandwidth(600.0)]
}

pub fn default_imu() -> ImuSpec {
    ImuSpec {
        rate_noise_rms_rad_s: 1e-4,
        sample_rate_hz: 1000.0,
    }
}

pub fn default_disturbance() -> DisturbanceProfile {
    let axis = |amplitude: f64, noise: f64| AxisDisturbance {
        sinusoids: vec![Sinusoid {
            amplitude_rad: amplitude,
            frequency_hz: 0.5,
            phase_rad: 0.0,
        }],
        noise_rms_rad: noise,
        noise_bandwidth_hz: 3.0,
    };
    DisturbanceProfile {
        pitch: axis(50e-6, 50e-6),
        azimuth: axis(50e-6, 25e-6),
    }
}

pub fn default_gains() -> LoopGains {
    LoopGains {
        coarse: ControllerGains {
            kp: 0.0,
            ki: 15.0,
            kd: 0.0,
            windup_limit: 1e-3,
        },
        fine1: ControllerGains {
            kp: 0.0,
            ki: 55.0,
            kd: 0.0,
            windup_limit: 4.5e-6,
        },
        fine2: ControllerGains {
            kp: 0.0,
            ki: 500.0,
            kd: 0.0,
            windup_limit: 5e-7,
        },
    }
}

impl Scenario {
    pub fn from_json(text: &str, path: &Path) -> Result<Self> {
        let scenario: Scenario = serde_json::from_str(text).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            message: e.to_string(),
            line: e.line(),
            column: e.column(),
        })?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("scenario serializes");
        s.push('\n');
        s
    }

    pub fn is_bench(&self) -> bool {
        self.bench.is_some()
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::validation(
                "schema_version",
                format!(
                    "unsupported version {} (expected {SCHEMA_VERSION})",
                    self.schema_version
                ),
            ));
        }
        if !(self.duration_s > 0.0 && self.duration_s.is_finite()) {
            return Err(Error::validation("duration_s", "must be finite and > 0"));
        }
        self.antenna.validate("antenna")?;
        if !(self.beam.waist_ratio > 0.0 && self.beam.waist_ratio <= 1.0) {
            return Err(Error::validation("beam.waist_ratio", "must be in (0, 1]"));
        }
        self.beam().validate("beam", &self.antenna)?;
        self.atmosphere().validate("atmosphere")?;
        self.coupling.validate("coupling")?;
        self.transceiver.validate("transceiver")?;
        if let Some(bench) = &self.bench {
            if !(bench.attenuation_db >= 0.0 && bench.attenuation_db.is_finite()) {
                return Err(Error::validation("bench.attenuation_db", "must be finite and >= 0"));
            }
            return Ok(());
        }
        self.tracking_config()?.validate()
    }

    pub fn beam(&self) -> BeamModel {
        BeamModel {
            wavelength_m: self.beam.wavelength_m,
            waist_radius_m: self.beam.waist_ratio * self.antenna.aperture_radius_m(),
        }
    }

    pub fn atmosphere(&self) -> AtmosphereModel {
        AtmosphereModel {
            visibility_m: self.atmosphere.visibility_m.unwrap_or(f64::INFINITY),
            wavelength_m: self.beam.wavelength_m,
        }
    }

    /// Both terminals carry identical optics.
    pub fn optics(&self) -> OpticsContext {
        OpticsContext {
            beam: self.beam(),
            tx: self.antenna,
            rx: self.antenna,
            atmosphere: self.atmosphere(),
            coupling: self.coupling,
        }
    }

    pub fn distance_m(&self) -> Result<f64> {
        Ok(slant_range_m(
            &self.node_a.position("node_a")?,
            &self.node_b.position("node_b")?,
        ))
    }

    /// Line of sight to node B in node A's gimbal frame.
    pub fn gimbal_target(&self) -> Result<Axes> {
        let a = self.node_a.position("node_a")?;
        let b = self.node_b.position("node_b")?;
        let p = pointing_solution(&a, &b)?;
        Ok(Axes::new(
            p.elevation_rad,
            wrap_pi(p.azimuth_rad - self.node_a.heading_deg.to_radians()),
        ))
    }

    pub fn tracking_config(&self) -> Result<TrackingConfig> {
        Ok(TrackingConfig {
            name: self.name.clone(),
            target: self.gimbal_target()?,
            beacons: self.beacons,
            cmos: self.cmos,
            gimbal: self.gimbal,
            fsm: self.fsm,
            imu: self.imu,
            disturbance: self.disturbance.clone(),
            gains: self.gains,
            transitions: self.apt.transitions(),
            acquisition_bias_rad: self.apt.acquisition_bias_rad,
            imu_feedforward: self.apt.imu_feedforward,
            stabilization_leak_s: self.apt.stabilization_leak_s,
            stages: self.apt.stages,
            warmup_s: self.warmup_s,
            initial_state: self.apt.initial_state,
        })
    }
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Scenario::from_json(&text, path)
}
