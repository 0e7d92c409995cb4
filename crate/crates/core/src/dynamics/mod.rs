//! Platform disturbance and the physical devices of one terminal: gimbal,
//! fast steering mirrors, beacon cones, CMOS trackers and the IMU.
//!
//! Angles are small and handled per axis (pitch, azimuth) in object space,
//! i.e. as seen on the sky in front of the telescope.

mod actuators;
mod disturbance;
mod sensors;

pub use actuators::{fsm_step, gimbal_step, FsmSpec, FsmState, GimbalSpec, GimbalState};
pub use disturbance::{disturbance_sample, AxisDisturbance, Disturbance, DisturbanceProfile, Sinusoid};
pub use sensors::{beacon_visible, cmos_measure, imu_measure, BeaconSpec, CmosSpec, ImuSpec, SensorFrame};

/// Fraction of the remaining gap a first-order lag closes in `dt_s`.
pub(crate) fn lag_fraction(bandwidth_hz: f64, dt_s: f64) -> f64 {
    -(-std::f64::consts::TAU * bandwidth_hz * dt_s).exp_m1()
}
