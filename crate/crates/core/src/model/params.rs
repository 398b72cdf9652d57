use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::units::{ghz, mhz};
use crate::{Error, Result};

/// Dressed system parameters. Frequencies and rates in rad/s, temperature in K.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub omega_r: f64,
    pub omega_q: f64,
    pub chi: f64,
    /// Modulated transverse coupling `g`.
    pub g: f64,
    /// Longitudinal coefficient `g′`, dimensionless (multiplies ξ in rad/s).
    pub g_prime: f64,
    pub kappa: f64,
    pub gamma: f64,
    pub gamma_phi: f64,
    pub temperature: f64,
}

impl SystemParams {
    /// Reference operating point: ω_r/2π = 4.89 GHz, ω_q/2π = 5.99 GHz,
    /// χ/2π = 0.5 MHz, κ/2π = 4 MHz, γ = Γφ = 0.1 µs⁻¹, T = 15 mK.
    ///
    /// `g` and `g′` only set the conversion between coupling strengths and
    /// modulation amplitudes; any positive values give the same dynamics.
    /// The defaults are the values derived from the reference circuit.
    pub fn reference() -> Self {
        Self {
            omega_r: ghz(4.89),
            omega_q: ghz(5.99),
            chi: mhz(0.5),
            g: mhz(30.0),
            g_prime: 0.08,
            kappa: mhz(4.0),
            gamma: 1e5,
            gamma_phi: 1e5,
            temperature: 0.015,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [("omega_r", self.omega_r), ("omega_q", self.omega_q)];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        let non_negative = [
            ("g", self.g),
            ("g_prime", self.g_prime),
            ("kappa", self.kappa),
            ("gamma", self.gamma),
            ("gamma_phi", self.gamma_phi),
            ("temperature", self.temperature),
        ];
        for (name, v) in non_negative {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be non-negative, got {v}"
                )));
            }
        }
        if !self.chi.is_finite() {
            return Err(Error::InvalidParameter("chi must be finite".into()));
        }
        Ok(())
    }
}

/// Point on or inside the Bloch sphere along the axis `n̂(θ, φ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilizationTarget {
    pub theta: f64,
    pub phi: f64,
    /// Bloch-vector length along `n̂`; 1 is the pure state `|n̂⟩`.
    pub mix: f64,
}

impl StabilizationTarget {
    pub fn pure(theta: f64, phi: f64) -> Result<Self> {
        Self::new(theta, phi, 1.0)
    }

    pub fn new(theta: f64, phi: f64, mix: f64) -> Result<Self> {
        let t = Self { theta, phi, mix };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=PI).contains(&self.theta) {
            return Err(Error::InvalidParameter(format!("theta {} outside [0, π]", self.theta)));
        }
        if !(0.0..2.0 * PI).contains(&self.phi) {
            return Err(Error::InvalidParameter(format!("phi {} outside [0, 2π)", self.phi)));
        }
        if !(0.0..=1.0).contains(&self.mix) {
            return Err(Error::InvalidParameter(format!("mix {} outside [0, 1]", self.mix)));
        }
        Ok(())
    }

    /// Unit vector `(sinθ cosφ, sinθ sinφ, cosθ)`.
    pub fn axis(&self) -> [f64; 3] {
        [
            self.theta.sin() * self.phi.cos(),
            self.theta.sin() * self.phi.sin(),
            self.theta.cos(),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_is_valid() {
        SystemParams::reference().validate().unwrap();
    }

    #[test]
    fn rejects_bad_values() {
        let mut p = SystemParams::reference();
        p.kappa = -1.0;
        assert!(p.validate().is_err());
        let mut p = SystemParams::reference();
        p.omega_q = 0.0;
        assert!(p.validate().is_err());
        assert!(StabilizationTarget::new(3.5, 0.0, 1.0).is_err());
        assert!(StabilizationTarget::new(1.0, 2.0 * PI, 1.0).is_err());
        assert!(StabilizationTarget::new(1.0, 0.0, 1.1).is_err());
    }
}
