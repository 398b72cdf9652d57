//! Batch front end for the stabilization toolkit: JSON configs with explicit
//! units, parallel grid sweeps written as CSV with a JSON sidecar, and the
//! validation and reporting commands of the `qstab` binary.

pub mod config;
pub mod error;
pub mod output;
pub mod quantity;
pub mod report;
pub mod run;

pub use config::{ConfigFile, RunConfig};
pub use error::{HarnessError, Result};
