//! Deterministic simulation of a point-to-point free-space optical link.
//!
//! The crate models a pair of fiber-coupled terminals with a cascaded
//! acquisition, pointing and tracking (APT) stack: IMU stabilization, a
//! gimbal-driven coarse loop and two nested fast-steering-mirror loops.
//! Residual pointing error is turned into a link budget, then into a
//! transceiver throughput series.
//!
//! Layout:
//!
//! - [`geometry`]: WGS-84 conversions and the initial pointing solution.
//! - [`optics`]: diffraction, optics, atmosphere and fiber-coupling losses.
//! - [`dynamics`]: disturbance, actuators and sensors.
//! - [`apt`]: PID, the APT state machine and the fixed-step simulator.
//! - [`link`]: loss and throughput series plus summary statistics.
//! - [`cli`]: scenario files, calibration, reports and the command verbs.
//!
//! Runnable walkthroughs live in `examples/`; the `fsolink` binary is a
//! thin wrapper around [`cli`].

pub mod apt;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod geometry;
pub mod link;
pub mod optics;
pub mod rng;
pub mod table;
pub mod units;

pub use error::{Error, Result};
