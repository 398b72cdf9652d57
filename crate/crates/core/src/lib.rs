//! Autonomous single-qubit state stabilization through sideband couplings to
//! a lossy resonator.
//!
//! The crate is split by concern:
//!
//! * [`quantum`] holds the dense operator algebra on qubit ⊗ resonator, the
//!   Lindblad generator, the steady-state solver and the time integrators.
//! * [`model`] builds rotating-frame and lab-frame Hamiltonians, collapse
//!   channels and the drive plan that targets a point of the Bloch sphere.
//! * [`analytic`] evaluates the closed-form three-level predictions and the
//!   damping classification of the stabilization transient.
//! * [`circuit`] reduces raw circuit energies to the dressed parameters used
//!   by the other modules.
//!
//! All frequencies and rates are angular (rad/s), times are in seconds and
//! temperatures in kelvin.

pub mod analytic;
pub mod circuit;
mod error;
pub mod model;
pub mod quantum;
pub mod units;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
