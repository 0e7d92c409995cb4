//! Acquisition, pointing and tracking: the state machine and the cascaded
//! loops it switches on.
//!
//! Loop nesting, outermost first:
//!
//! 1. IMU feedforward subtracts the integrated base rotation from the
//!    gimbal command.
//! 2. Coarse loop: CMOS0 drives the gimbal.
//! 3. First fine loop: CMOS1 drives FSM1 and sees the error left by the
//!    gimbal.
//! 4. Second fine loop: CMOS2 drives FSM2 and sees the error left by FSM1.
//!
//! Acquisition is a mode, not a loop: the gimbal is pointed open-loop at
//! the geodetic pointing solution until the coarse camera sees the far
//! beacon.

mod pid;
mod series;
mod sim;
mod state;

pub use pid::{pid_step, ControllerGains, Pid};
pub use series::{stats_of, tracking_stats, TrackingSample, TrackingSeries, TrackingStats, TRACKING_HEADER};
pub use sim::{run_apt, InitialState, LoopGains, Simulator, StageMask, TrackingConfig, SAMPLE_PERIOD_S};
pub use state::{apt_transition, AptState, Dwell, Locks, StageEnable, TransitionConfig};
