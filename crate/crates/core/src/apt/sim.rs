use rand::Rng;
use serde::{Deserialize, Serialize};

use super::pid::{ControllerGains, Pid};
use super::series::{TrackingSample, TrackingSeries};
use super::state::{apt_transition, AptState, Dwell, Locks, StageEnable, TransitionConfig};
use crate::dynamics::{
    beacon_visible, cmos_measure, fsm_step, gimbal_step, imu_measure, BeaconSpec, CmosSpec, Disturbance,
    DisturbanceProfile, FsmSpec, FsmState, GimbalSpec, GimbalState, ImuSpec, SensorFrame,
};
use crate::error::{Error, Result};
use crate::rng::{stream, SimRng, Stream};
use crate::units::Axes;

/// Fixed simulation step: the 1 kHz camera frame period.
pub const SAMPLE_PERIOD_S: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LoopGains {
    pub coarse: ControllerGains,
    pub fine1: ControllerGains,
    pub fine2: ControllerGains,
}

/// When each fine loop is allowed to close.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageMask {
    #[serde(default = "yes")]
    pub fine1: bool,
    #[serde(default = "yes")]
    pub fine2: bool,
    /// Fine loops stay open until this time; `None` means always allowed.
    #[serde(default)]
    pub fine_after_s: Option<f64>,
}

fn yes() -> bool {
    true
}

impl Default for StageMask {
    fn default() -> Self {
        Self {
            fine1: true,
            fine2: true,
            fine_after_s: None,
        }
    }
}

impl StageMask {
    pub fn coarse_only() -> Self {
        Self {
            fine1: false,
            fine2: false,
            fine_after_s: None,
        }
    }

    pub fn first_fine_only() -> Self {
        Self {
            fine1: true,
            fine2: false,
            fine_after_s: None,
        }
    }

    pub fn at(&self, t_s: f64) -> StageEnable {
        let open = self.fine_after_s.is_some_and(|t0| t_s < t0);
        StageEnable {
            fine1: self.fine1 && !open,
            fine2: self.fine1 && self.fine2 && !open,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialState {
    /// Start from the gimbal home position and run the full sequence.
    #[default]
    Stabilize,
    /// Start with every loop closed on a perfectly pointed terminal.
    Linked,
}

/// Everything the tracking simulator needs for one terminal.
///
/// The far terminal is assumed symmetric: its transmit pointing error,
/// which decides whether its beacons reach us, equals ours at each stage.
#[derive(Debug, Clone, PartialEq)]
pub struct TrackingConfig {
    pub name: String,
    /// Line of sight to the far terminal in gimbal axes (pitch = elevation,
    /// azimuth relative to the mount heading).
    pub target: Axes,
    /// Far-terminal beacons for the coarse, first and second fine stage.
    pub beacons: [BeaconSpec; 3],
    pub cmos: [CmosSpec; 3],
    pub gimbal: GimbalSpec,
    pub fsm: [FsmSpec; 2],
    pub imu: ImuSpec,
    pub disturbance: DisturbanceProfile,
    pub gains: LoopGains,
    pub transitions: TransitionConfig,
    /// Radial error of the open-loop acquisition pointing.
    pub acquisition_bias_rad: f64,
    pub imu_feedforward: bool,
    /// Time constant of an optional leak on the integrated IMU attitude;
    /// `None` integrates the measured rate without loss.
    pub stabilization_leak_s: Option<f64>,
    pub stages: StageMask,
    /// Simulated time before t = 0 that is not recorded.
    pub warmup_s: f64,
    pub initial_state: InitialState,
}

impl TrackingConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.target.is_finite() {
            return Err(Error::validation("target", "line of sight must be finite"));
        }
        if self.target.pitch.abs() > self.gimbal.pitch_range_rad
            || self.target.azimuth.abs() > self.gimbal.azimuth_range_rad
        {
            return Err(Error::validation(
                "gimbal",
                "line of sight to the far terminal is outside the gimbal travel",
            ));
        }
        for (i, b) in self.beacons.iter().enumerate() {
            b.validate(&format!("beacons[{i}]"))?;
        }
        for (i, c) in self.cmos.iter().enumerate() {
            c.validate(&format!("cmos[{i}]"))?;
        }
        self.gimbal.validate("gimbal")?;
        for (i, f) in self.fsm.iter().enumerate() {
            f.validate(&format!("fsm[{i}]"))?;
        }
        self.imu.validate("imu")?;
        self.disturbance.validate("disturbance")?;
        self.gains.coarse.validate("gains.coarse")?;
        self.gains.fine1.validate("gains.fine1")?;
        self.gains.fine2.validate("gains.fine2")?;
        let coarse = self.cmos[0].half_fov();
        for i in 1..3 {
            let h = self.cmos[i].half_fov();
            if h.pitch > coarse.pitch || h.azimuth > coarse.azimuth {
                return Err(Error::validation(
                    format!("cmos[{i}]"),
                    "fine field of view must not exceed the coarse field of view",
                ));
            }
        }
        for (i, f) in self.fsm.iter().enumerate() {
            if f.range_rad >= coarse.pitch.min(coarse.azimuth) {
                return Err(Error::validation(
                    format!("fsm[{i}].range_rad"),
                    "mirror range must be smaller than the coarse field of view",
                ));
            }
        }
        if !(self.acquisition_bias_rad >= 0.0 && self.acquisition_bias_rad.is_finite()) {
            return Err(Error::validation("apt.acquisition_bias_rad", "must be finite and >= 0"));
        }
        if self.stabilization_leak_s.is_some_and(|t| !(t > 0.0)) {
            return Err(Error::validation("apt.stabilization_leak_s", "must be > 0"));
        }
        if !(self.warmup_s >= 0.0 && self.warmup_s.is_finite()) {
            return Err(Error::validation("warmup_s", "must be finite and >= 0"));
        }
        let t = &self.transitions;
        if !(t.capture_threshold_rad > 0.0 && t.link_threshold_rad > 0.0) {
            return Err(Error::validation("apt", "thresholds must be > 0"));
        }
        if t.lock_loss_frames == 0 {
            return Err(Error::validation("apt.lock_loss_frames", "must be >= 1"));
        }
        Ok(())
    }
}

/// Random streams, one per stochastic component.
struct Streams {
    disturbance: SimRng,
    imu: SimRng,
    cmos: [SimRng; 3],
}

/// Fixed-step simulator of one terminal's APT stack.
pub struct Simulator {
    cfg: TrackingConfig,
    rng: Streams,
    disturbance: Disturbance,
    tick: i64,
    state: AptState,
    dwell: Dwell,
    gimbal: GimbalState,
    fsm: [FsmState; 2],
    pids: [Pid; 3],
    base_prev: Option<Axes>,
    attitude_estimate: Axes,
    acquisition_pointing: Axes,
    decimation: [u64; 4],
    frames: [SensorFrame; 3],
    imu_rate: Axes,
}

impl Simulator {
    pub fn new(cfg: TrackingConfig, seed: u64) -> Result<Self> {
        cfg.validate()?;
        let mut acq = stream(seed, Stream::Acquisition);
        let theta: f64 = acq.random_range(0.0..std::f64::consts::TAU);
        let bias = Axes::new(theta.sin(), theta.cos()) * cfg.acquisition_bias_rad;
        let acquisition_pointing = cfg.target + bias;
        let decimate = |rate: f64| ((1.0 / (rate * SAMPLE_PERIOD_S)).round() as u64).max(1);
        let decimation = [
            decimate(cfg.cmos[0].frame_rate_hz),
            decimate(cfg.cmos[1].frame_rate_hz),
            decimate(cfg.cmos[2].frame_rate_hz),
            decimate(cfg.imu.sample_rate_hz),
        ];
        let pids = [
            Pid::new(cfg.gains.coarse),
            Pid::new(cfg.gains.fine1),
            Pid::new(cfg.gains.fine2),
        ];
        let warmup_ticks = (cfg.warmup_s / SAMPLE_PERIOD_S).round() as i64;
        let mut sim = Self {
            rng: Streams {
                disturbance: stream(seed, Stream::Disturbance),
                imu: stream(seed, Stream::Imu),
                cmos: [
                    stream(seed, Stream::Cmos0),
                    stream(seed, Stream::Cmos1),
                    stream(seed, Stream::Cmos2),
                ],
            },
            disturbance: Disturbance::new(cfg.disturbance.clone(), SAMPLE_PERIOD_S),
            tick: -warmup_ticks,
            state: AptState::Stabilize,
            dwell: Dwell::default(),
            gimbal: GimbalState::default(),
            fsm: [FsmState::default(); 2],
            pids,
            base_prev: None,
            attitude_estimate: Axes::ZERO,
            acquisition_pointing,
            decimation,
            frames: [SensorFrame::invalid(0.0); 3],
            imu_rate: Axes::ZERO,
            cfg,
        };
        if sim.cfg.initial_state == InitialState::Linked {
            sim.state = AptState::Linked;
            sim.gimbal.angles = sim.cfg.target;
            // integrator that exactly cancels the acquisition bias
            let ki = sim.cfg.gains.coarse.ki;
            if ki > 0.0 {
                sim.pids[0].integrator = -bias * (1.0 / ki);
            }
        }
        Ok(sim)
    }

    pub fn config(&self) -> &TrackingConfig {
        &self.cfg
    }

    pub fn state(&self) -> AptState {
        self.state
    }

    pub fn time_s(&self) -> f64 {
        self.tick as f64 * SAMPLE_PERIOD_S
    }

    /// Advances one tick and returns the sample describing it.
    pub fn step(&mut self) -> TrackingSample {
        let dt = SAMPLE_PERIOD_S;
        let t = self.time_s();
        let cfg = &self.cfg;

        // base motion and its rate
        let base = self.disturbance.sample(t, &mut self.rng.disturbance);
        let base_rate = match self.base_prev {
            Some(prev) => (base - prev) * (1.0 / dt),
            None => Axes::ZERO,
        };
        self.base_prev = Some(base);

        // IMU attitude estimate: integral of the measured rate
        let imu_rate = imu_measure(&cfg.imu, base_rate, &mut self.rng.imu);
        if self.tick.rem_euclid(self.decimation[3] as i64) == 0 {
            self.imu_rate = imu_rate;
        }
        if cfg.imu_feedforward {
            let leak = cfg.stabilization_leak_s.map_or(1.0, |tau| 1.0 - dt / tau);
            self.attitude_estimate = self.attitude_estimate * leak + self.imu_rate * dt;
        }

        // true line-of-sight errors after each actuator
        let e0 = cfg.target - (base + self.gimbal.angles);
        let e1 = e0 - self.fsm[0].deflection;
        let e2 = e1 - self.fsm[1].deflection;
        let stage_errors = [e0, e1, e2];

        for (i, err) in stage_errors.iter().enumerate() {
            let seen = beacon_visible(&cfg.beacons[i], err.norm());
            let frame = cmos_measure(&cfg.cmos[i], err.pitch, err.azimuth, seen, t, &mut self.rng.cmos[i]);
            if self.tick.rem_euclid(self.decimation[i] as i64) == 0 {
                self.frames[i] = frame;
            }
        }
        let locks = Locks {
            coarse: self.frames[0].valid,
            fine1: self.frames[1].valid,
            fine2: self.frames[2].valid,
        };

        // state machine
        let measured_residual = |stage: Option<usize>, frames: &[SensorFrame; 3]| match stage {
            Some(i) if frames[i].valid => frames[i].offset().norm(),
            _ => f64::INFINITY,
        };
        let residual = measured_residual(self.state.innermost_stage(), &self.frames);
        self.dwell.in_state += 1;
        self.dwell.lock_lost = if self.state.required_locks_held(locks) {
            0
        } else {
            self.dwell.lock_lost + 1
        };
        let below_link = measured_residual(Some(2), &self.frames) < cfg.transitions.link_threshold_rad;
        self.dwell.below_link = if below_link { self.dwell.below_link + 1 } else { 0 };
        let next = apt_transition(
            self.state,
            locks,
            residual,
            self.dwell,
            &cfg.transitions,
            cfg.stages.at(t),
        );
        if next != self.state {
            self.dwell = Dwell::default();
            match next {
                AptState::Acquire | AptState::Reacquire => {
                    for p in &mut self.pids {
                        p.reset();
                    }
                }
                AptState::FineTrack1 => self.pids[1].reset(),
                AptState::FineTrack2 => self.pids[2].reset(),
                _ => {}
            }
            self.state = next;
        }

        // controllers
        let stage = self.state.innermost_stage();
        let coarse_cmd = match stage {
            Some(_) => {
                let out = if self.frames[0].valid {
                    self.pids[0].step(self.frames[0].offset(), dt)
                } else {
                    self.pids[0].hold()
                };
                self.acquisition_pointing + out
            }
            None if self.state == AptState::Stabilize => Axes::ZERO,
            None => self.acquisition_pointing,
        };
        let gimbal_cmd = coarse_cmd - self.attitude_estimate;

        let mut fsm_cmd = [Axes::ZERO; 2];
        for (k, cmd) in fsm_cmd.iter_mut().enumerate() {
            let loop_index = k + 1;
            if stage.is_some_and(|s| s >= loop_index) {
                let out = if self.frames[loop_index].valid {
                    self.pids[loop_index].step(self.frames[loop_index].offset(), dt)
                } else {
                    self.pids[loop_index].hold()
                };
                let r = cfg.fsm[k].range_rad;
                *cmd = out.map(|c| c.clamp(-r, r));
            }
        }

        // record what was seen this tick, then move the actuators
        let error = match stage {
            Some(i) => stage_errors[i],
            None => e0,
        };
        let sample = TrackingSample {
            t_s: t,
            state: self.state,
            error_pitch_rad: error.pitch,
            error_azimuth_rad: error.azimuth,
            gimbal: self.gimbal.angles,
            fsm1: self.fsm[0].deflection,
            fsm2: self.fsm[1].deflection,
            locks,
        };

        self.gimbal = gimbal_step(&self.gimbal, &cfg.gimbal, gimbal_cmd, dt);
        for ((fsm, spec), cmd) in self.fsm.iter_mut().zip(&cfg.fsm).zip(fsm_cmd) {
            *fsm = fsm_step(fsm, spec, cmd, dt);
        }
        self.tick += 1;
        sample
    }
}

/// Runs the simulator for `duration_s` of recorded time after the warm-up.
pub fn run_apt(cfg: &TrackingConfig, duration_s: f64, seed: u64) -> Result<TrackingSeries> {
    if !(duration_s > 0.0 && duration_s.is_finite()) {
        return Err(Error::validation("duration_s", "must be finite and > 0"));
    }
    let mut sim = Simulator::new(cfg.clone(), seed)?;
    while sim.tick < 0 {
        sim.step();
    }
    let n = (duration_s / SAMPLE_PERIOD_S).round() as usize;
    let samples = (0..n).map(|_| sim.step()).collect();
    Ok(TrackingSeries {
        sample_period_s: SAMPLE_PERIOD_S,
        scenario: cfg.name.clone(),
        seed,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stage_mask_opens_fine_loops_late() {
        let m = StageMask {
            fine_after_s: Some(30.0),
            ..StageMask::default()
        };
        assert_eq!(m.at(29.999), StageEnable::COARSE_ONLY);
        assert_eq!(m.at(30.0), StageEnable::ALL);
        assert_eq!(StageMask::coarse_only().at(100.0), StageEnable::COARSE_ONLY);
    }

    #[test]
    fn second_fine_loop_needs_the_first() {
        let m = StageMask {
            fine1: false,
            fine2: true,
            fine_after_s: None,
        };
        assert_eq!(m.at(0.0), StageEnable::COARSE_ONLY);
        assert_eq!(
            StageMask::first_fine_only().at(0.0),
            StageEnable {
                fine1: true,
                fine2: false
            }
        );
    }
}
