use ndarray::{s, Array2};
use serde::Serialize;

use super::fluxonium::FluxoniumSpectrum;
use super::params::CircuitParams;
use crate::{Error, Result, C64};

/// Upper bound on the coupler oscillator length `(8E_b/E_J)^{1/4}`.
pub const MAX_OSCILLATOR_LENGTH: f64 = 0.5;

/// Harmonic resonator (a) and coupler (b) modes plus their couplings to the
/// fluxonium levels.
#[derive(Clone, Debug, Serialize)]
pub struct BareModes {
    pub omega_a: f64,
    pub omega_b: f64,
    /// Fluxonium energies `E_j`, rad/s.
    pub energies: Vec<f64>,
    pub omega_ab: f64,
    /// `g_a;jk`, entering as `i(a† − a) ⊗ Σ g_a;jk |j⟩⟨k|`.
    #[serde(skip)]
    pub g_a: Array2<C64>,
    #[serde(skip)]
    pub g_b: Array2<C64>,
    pub eps1: f64,
    pub eps2: f64,
    /// `√(2E_b/(E_Lr + E_J)) · E_J`, rad/s.
    pub mod_scale: f64,
    pub e_j1eff_dc: f64,
}

impl BareModes {
    pub fn levels(&self) -> usize {
        self.energies.len()
    }

    /// Copy with `Ω_ab`, `g_a` and `g_b` multiplied by `s`.
    pub fn scaled_couplings(&self, s: f64) -> Self {
        Self {
            omega_ab: self.omega_ab * s,
            g_a: self.g_a.mapv(|z| z * s),
            g_b: self.g_b.mapv(|z| z * s),
            ..self.clone()
        }
    }

    /// Copy restricted to the lowest `levels` fluxonium states.
    pub fn truncated(&self, levels: usize) -> Self {
        let l = levels.min(self.levels());
        Self {
            energies: self.energies[..l].to_vec(),
            g_a: self.g_a.slice(s![..l, ..l]).to_owned(),
            g_b: self.g_b.slice(s![..l, ..l]).to_owned(),
            ..self.clone()
        }
    }
}

pub fn bare_modes(p: &CircuitParams, e_j1eff_dc: f64, flux: &FluxoniumSpectrum) -> Result<BareModes> {
    p.validate()?;
    if !(e_j1eff_dc > 0.0 && p.e_a > 0.0 && p.e_b > 0.0 && p.e_lr > 0.0) {
        return Err(Error::InvalidParameter(
            "E_a, E_b, E_Lr and the effective SQUID energy must be positive".into(),
        ));
    }
    let length = (8.0 * p.e_b / e_j1eff_dc).powf(0.25);
    if length >= MAX_OSCILLATOR_LENGTH {
        return Err(Error::PhaseExpansion(length));
    }
    let e_j = e_j1eff_dc;
    let omega_a = (8.0 * p.e_a * p.e_lr).sqrt();
    let omega_b = (8.0 * p.e_b * (p.e_lr + e_j)).sqrt();
    let phi_a = (2.0 * p.e_a / p.e_lr).powf(0.25);
    let phi_b = (2.0 * p.e_b / (p.e_lr + e_j)).powf(0.25);
    let omega_ab = p.e_lr * phi_a * phi_b;
    let n_a = (p.e_lr / (32.0 * p.e_a)).powf(0.25);
    let n_b = ((p.e_lr + e_j) / (32.0 * p.e_b)).powf(0.25);
    let half = p.phi_sq_dc / 2.0;
    Ok(BareModes {
        omega_a,
        omega_b,
        energies: flux.energies.clone(),
        omega_ab,
        g_a: flux.n.mapv(|z| z * (p.e_ac * n_a)),
        g_b: flux.n.mapv(|z| z * (p.e_bc * n_b)),
        eps1: half.sin() * p.d1 / 4.0,
        eps2: half.sin() * p.d2 / 4.0,
        mod_scale: phi_b * phi_b * e_j,
        e_j1eff_dc,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{effective_josephson, fluxonium_spectrum};
    use crate::units::ghz;
    use approx::assert_relative_eq;

    fn flux(p: &CircuitParams) -> FluxoniumSpectrum {
        fluxonium_spectrum(p.e_c, p.e_j2, p.e_lq, p.phi_fl_dc, 6).unwrap()
    }

    #[test]
    fn reference_hierarchy() {
        let p = CircuitParams::reference();
        let j = effective_josephson(&p).unwrap();
        let m = bare_modes(&p, j.e_j1eff_dc, &flux(&p)).unwrap();
        assert!(m.omega_b > ghz(15.0) && m.omega_b > 2.0 * m.omega_a);
        let q = m.energies[1] - m.energies[0];
        assert!(m.omega_b > q && m.omega_b > m.omega_a);
        // coupling matrices are Hermitian, so i(a†−a)⊗G is Hermitian
        for g in [&m.g_a, &m.g_b] {
            for j in 0..6 {
                for k in 0..6 {
                    assert!((g[[j, k]] - g[[k, j]].conj()).norm() < 1e-9 * g[[0, 1]].norm());
                }
            }
        }
    }

    #[test]
    fn decoupled_capacitances() {
        let p = CircuitParams { e_ac: 0.0, e_bc: 0.0, ..CircuitParams::reference() };
        let r = CircuitParams::reference();
        let f = flux(&p);
        let m = bare_modes(&p, 1.0e12, &f).unwrap();
        let m0 = bare_modes(&r, 1.0e12, &f).unwrap();
        assert!(m.g_a.iter().chain(m.g_b.iter()).all(|z| z.norm() == 0.0));
        assert_eq!(m.omega_ab, m0.omega_ab);
    }

    #[test]
    fn coupler_coupling_scales_with_quartic_root() {
        let p = CircuitParams { e_lr: ghz(0.5), ..CircuitParams::reference() };
        let f = flux(&p);
        let ej = ghz(1000.0);
        let m1 = bare_modes(&p, ej, &f).unwrap();
        let m2 = bare_modes(&p, 2.0 * ej, &f).unwrap();
        let ratio = m2.g_b[[0, 1]].norm() / m1.g_b[[0, 1]].norm();
        assert_relative_eq!(ratio, 2f64.powf(0.25), max_relative = 1e-3);
    }

    #[test]
    fn rejects_long_coupler_oscillator() {
        let p = CircuitParams { e_b: ghz(100.0), ..CircuitParams::reference() };
        let f = flux(&p);
        assert!(matches!(bare_modes(&p, ghz(1000.0), &f), Err(Error::PhaseExpansion(_))));
    }
}
