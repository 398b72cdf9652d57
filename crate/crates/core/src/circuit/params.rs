use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

use crate::units::ghz;
use crate::{Error, Result};

/// Largest accepted modulation depth `d_n`.
pub const MAX_DEPTH: f64 = 0.2;
/// Depths above this trigger a warning.
pub const WARN_DEPTH: f64 = 0.05;
/// Smallest accepted `|cos(φ̄_sq/2)|`.
pub const MIN_SQUID_COS: f64 = 0.05;

/// Raw circuit energies (rad/s), flux biases (rad) and modulation depths.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitParams {
    #[serde(rename = "E_a")]
    pub e_a: f64,
    #[serde(rename = "E_b")]
    pub e_b: f64,
    #[serde(rename = "E_c")]
    pub e_c: f64,
    #[serde(rename = "E_ac")]
    pub e_ac: f64,
    #[serde(rename = "E_bc")]
    pub e_bc: f64,
    #[serde(rename = "E_Lr")]
    pub e_lr: f64,
    #[serde(rename = "E_Lq")]
    pub e_lq: f64,
    #[serde(rename = "E_J1")]
    pub e_j1: f64,
    #[serde(rename = "E_J2")]
    pub e_j2: f64,
    pub phi_sq_dc: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub phi_fl_dc: f64,
}

impl CircuitParams {
    /// Representative device: E_J1eff ≈ 2π·1000 GHz at φ̄_sq = π/2,
    /// E_Lr = 50 GHz, E_J2 = 10 GHz, E_c = 4 GHz, E_Lq = E_ac = E_bc = 0.3 GHz,
    /// E_a = E_b = 0.1 GHz (all ×2π).
    pub fn reference() -> Self {
        Self {
            e_a: ghz(0.1),
            e_b: ghz(0.1),
            e_c: ghz(4.0),
            e_ac: ghz(0.3),
            e_bc: ghz(0.3),
            e_lr: ghz(50.0),
            e_lq: ghz(0.3),
            e_j1: ghz(1000.0) / (2.0 * (FRAC_PI_2 / 2.0).cos()),
            e_j2: ghz(10.0),
            phi_sq_dc: FRAC_PI_2,
            d1: 0.04,
            d2: 0.04,
            d3: 0.01,
            phi_fl_dc: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let energies = [
            ("E_a", self.e_a),
            ("E_b", self.e_b),
            ("E_c", self.e_c),
            ("E_ac", self.e_ac),
            ("E_bc", self.e_bc),
            ("E_Lr", self.e_lr),
            ("E_Lq", self.e_lq),
            ("E_J1", self.e_j1),
            ("E_J2", self.e_j2),
        ];
        for (name, v) in energies {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be non-negative, got {v}")));
            }
        }
        for (name, d) in [("d1", self.d1), ("d2", self.d2), ("d3", self.d3)] {
            if !(d.is_finite() && d.abs() <= MAX_DEPTH) {
                return Err(Error::InvalidParameter(format!(
                    "modulation depth {name} = {d} exceeds {MAX_DEPTH}"
                )));
            }
            if d.abs() > WARN_DEPTH {
                log::warn!("modulation depth {name} = {d} is not small; expansion may be inaccurate");
            }
        }
        if !(self.phi_sq_dc.is_finite() && self.phi_fl_dc.is_finite()) {
            return Err(Error::InvalidParameter("flux biases must be finite".into()));
        }
        Ok(())
    }
}

/// Static SQUID energy and the two modulation amplitudes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JosephsonDrive {
    /// rad/s
    pub e_j1eff_dc: f64,
    pub eps1: f64,
    pub eps2: f64,
}

/// Splits `2E_J1 cos[(φ̄ − d₁cos ω₁t − d₂cos ω₂t)/2]` into its time average
/// (to second order in `d_n`) and the amplitudes `ε_n` of the linear part.
pub fn effective_josephson(p: &CircuitParams) -> Result<JosephsonDrive> {
    p.validate()?;
    let half = p.phi_sq_dc / 2.0;
    if half.cos().abs() <= MIN_SQUID_COS {
        return Err(Error::SquidBias(half.cos()));
    }
    let e_j1eff_dc = 2.0 * p.e_j1 * half.cos() * (1.0 - (p.d1 * p.d1 + p.d2 * p.d2) / 16.0);
    let eps = |d: f64| half.sin() * d / 4.0;
    Ok(JosephsonDrive { e_j1eff_dc, eps1: eps(p.d1), eps2: eps(p.d2) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn static_flux() {
        let p = CircuitParams { d1: 0.0, d2: 0.0, ..CircuitParams::reference() };
        let j = effective_josephson(&p).unwrap();
        assert_relative_eq!(j.e_j1eff_dc, 2.0 * p.e_j1 * (PI / 4.0).cos(), max_relative = 1e-14);
        assert_eq!((j.eps1, j.eps2), (0.0, 0.0));
    }

    #[test]
    fn amplitude_at_quarter_flux() {
        let p = CircuitParams { d1: 0.04, ..CircuitParams::reference() };
        let j = effective_josephson(&p).unwrap();
        assert_relative_eq!(j.eps1, (PI / 4.0).sin() * 0.01, max_relative = 1e-14);
        assert!((j.eps1 - 7.07e-3).abs() < 1e-5);
    }

    #[test]
    fn sweet_spot_has_no_linear_modulation() {
        let p = CircuitParams { phi_sq_dc: 0.0, d1: 0.15, d2: 0.1, ..CircuitParams::reference() };
        let j = effective_josephson(&p).unwrap();
        assert_eq!((j.eps1, j.eps2), (0.0, 0.0));
    }

    #[test]
    fn time_average_matches_quadrature() {
        let p = CircuitParams { d1: 0.05, d2: 0.03, ..CircuitParams::reference() };
        let j = effective_josephson(&p).unwrap();
        // incommensurate tones: average over a 2D torus
        let n = 400;
        let mut acc = 0.0;
        for a in 0..n {
            for b in 0..n {
                let (ta, tb) = (2.0 * PI * a as f64 / n as f64, 2.0 * PI * b as f64 / n as f64);
                acc += 2.0 * p.e_j1 * ((p.phi_sq_dc - p.d1 * ta.cos() - p.d2 * tb.cos()) / 2.0).cos();
            }
        }
        let avg = acc / (n * n) as f64;
        assert_relative_eq!(j.e_j1eff_dc, avg, max_relative = 1e-6);
    }

    #[test]
    fn rejects_bias_near_squid_zero() {
        let p = CircuitParams { phi_sq_dc: PI - 0.01, ..CircuitParams::reference() };
        assert!(matches!(effective_josephson(&p), Err(Error::SquidBias(_))));
    }

    #[test]
    fn rejects_large_depth() {
        let p = CircuitParams { d2: 0.3, ..CircuitParams::reference() };
        assert!(p.validate().is_err());
    }
}
