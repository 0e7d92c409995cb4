//! Scenario ingestion, calibration and the command implementations behind
//! the `fsolink` binary.

mod calibrate;
mod commands;
mod scenario;

pub use calibrate::*;
pub use commands::*;
pub use scenario::*;
