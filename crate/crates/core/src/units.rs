//! Physical constants and unit helpers.

use std::f64::consts::TAU;

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;

/// Angular frequency (rad/s) of a cyclic frequency given in MHz.
pub fn mhz(f: f64) -> f64 {
    TAU * f * 1e6
}

/// Angular frequency (rad/s) of a cyclic frequency given in GHz.
pub fn ghz(f: f64) -> f64 {
    TAU * f * 1e9
}

/// Boltzmann factor `exp(-ħω / k_B T)`; zero at `T = 0`.
pub fn boltzmann_factor(omega: f64, temperature: f64) -> f64 {
    if temperature <= 0.0 {
        0.0
    } else {
        (-HBAR * omega / (K_B * temperature)).exp()
    }
}

/// Wraps an angle into `(-π, π]`.
pub fn wrap_phase(phase: f64) -> f64 {
    let mut p = phase.rem_euclid(TAU);
    if p > std::f64::consts::PI {
        p -= TAU;
    }
    p
}
