use nalgebra::{Matrix4, Vector4};
use serde::{Deserialize, Serialize};

use crate::units::boltzmann_factor;
use crate::{Error, Result};

/// `(γ̃⁻, γ̃⁺, Γ̃φ)` for an axis at polar angle `θ`.
pub fn effective_rates(theta: f64, gamma: f64, gamma_phi: f64) -> (f64, f64, f64) {
    let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let s2 = theta.sin().powi(2);
    let minus = gamma * c.powi(4) + 0.5 * gamma_phi * s2;
    let plus = gamma * s.powi(4) + 0.5 * gamma_phi * s2;
    let dephasing = 0.5 * gamma * s2 + gamma_phi * theta.cos().powi(2);
    (minus, plus, dephasing)
}

/// Inputs of the three-level model, all in rad/s.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThreeLevelParams {
    pub g_eps: f64,
    pub kappa: f64,
    pub gamma_minus: f64,
    pub gamma_plus: f64,
    pub gamma_phi_eff: f64,
    pub kappa_th: f64,
}

impl ThreeLevelParams {
    /// Rates for axis angle `θ` from bare `γ`, `Γφ`, with `κ_th` from the
    /// resonator Boltzmann factor.
    pub fn for_axis(
        g_eps: f64,
        kappa: f64,
        theta: f64,
        gamma: f64,
        gamma_phi: f64,
        omega_r: f64,
        temperature: f64,
    ) -> Self {
        let (gamma_minus, gamma_plus, gamma_phi_eff) = effective_rates(theta, gamma, gamma_phi);
        Self {
            g_eps,
            kappa,
            gamma_minus,
            gamma_plus,
            gamma_phi_eff,
            kappa_th: kappa * boltzmann_factor(omega_r, temperature),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("kappa", self.kappa),
            ("gamma_minus", self.gamma_minus),
            ("gamma_plus", self.gamma_plus),
            ("gamma_phi_eff", self.gamma_phi_eff),
            ("kappa_th", self.kappa_th),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be non-negative, got {v}")));
            }
        }
        if !(self.g_eps.is_finite() && self.g_eps > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "g_eps must be positive, got {}",
                self.g_eps
            )));
        }
        Ok(())
    }

    /// Coherence damping `κ/2 + γ̃⁺/2 + Γ̃φ`.
    pub fn coherence_decay(&self) -> f64 {
        0.5 * self.kappa + 0.5 * self.gamma_plus + self.gamma_phi_eff
    }

    /// Same parameters with qubit decoherence switched off.
    pub fn without_qubit_decoherence(&self) -> Self {
        Self {
            gamma_minus: 0.0,
            gamma_plus: 0.0,
            gamma_phi_eff: 0.0,
            ..*self
        }
    }

    /// Generator for `(ρ11, ρ22, ρ33, C)`.
    pub fn generator(&self) -> Matrix4<f64> {
        let (ge, k, gm, gp) = (self.g_eps, self.kappa, self.gamma_minus, self.gamma_plus);
        let gc = self.coherence_decay();
        Matrix4::new(
            -gp, gm, 0.0, -2.0 * ge, //
            gp, -gm, k, 0.0, //
            0.0, 0.0, -k, 2.0 * ge, //
            ge, 0.0, -ge, -gc,
        )
    }
}

/// Populations of `|0,−n̂⟩`, `|0,n̂⟩`, `|1,n̂⟩` and `C = Im⟨0,−n̂|ρ|1,n̂⟩`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThreeLevelState {
    pub rho11: f64,
    pub rho22: f64,
    pub rho33: f64,
    pub c: f64,
}

const STATE_TOL: f64 = 1e-10;

impl ThreeLevelState {
    pub fn new(rho11: f64, rho22: f64, rho33: f64, c: f64) -> Result<Self> {
        let s = Self { rho11, rho22, rho33, c };
        s.validate()?;
        Ok(s)
    }

    /// All population in `|0,−n̂⟩`.
    pub fn start() -> Self {
        Self { rho11: 1.0, rho22: 0.0, rho33: 0.0, c: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        let total = self.rho11 + self.rho22 + self.rho33;
        if !((total - 1.0).abs() <= STATE_TOL) {
            return Err(Error::InvalidState(format!("populations sum to {total}")));
        }
        for p in [self.rho11, self.rho22, self.rho33] {
            if !(-STATE_TOL..=1.0 + STATE_TOL).contains(&p) {
                return Err(Error::InvalidState(format!("population {p} outside [0, 1]")));
            }
        }
        if !self.c.is_finite() {
            return Err(Error::InvalidState("coherence is not finite".into()));
        }
        Ok(())
    }

    /// `⟨σ_n̂⟩ = ρ22 + ρ33 − ρ11`.
    pub fn sigma_n(&self) -> f64 {
        self.rho22 + self.rho33 - self.rho11
    }

    fn vector(&self) -> Vector4<f64> {
        Vector4::new(self.rho11, self.rho22, self.rho33, self.c)
    }

    fn from_vector(v: &Vector4<f64>) -> Self {
        Self { rho11: v[0], rho22: v[1], rho33: v[2], c: v[3] }
    }
}

/// Stationary point of the generator with unit total population.
pub fn steady_three_level(p: &ThreeLevelParams) -> Result<ThreeLevelState> {
    p.validate()?;
    let mut a = p.generator();
    // The population rows are linearly dependent; swap one for normalization.
    a.set_row(1, &nalgebra::RowVector4::new(1.0, 1.0, 1.0, 0.0));
    let b = Vector4::new(0.0, 1.0, 0.0, 0.0);
    let x = a.lu().solve(&b).ok_or(Error::SingularRates)?;
    Ok(ThreeLevelState::from_vector(&x))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SteadyFidelity {
    pub fidelity: f64,
    pub c: f64,
    pub state: ThreeLevelState,
}

/// Closed-form steady fidelity with the full steady state alongside.
pub fn exact_steady_fidelity(p: &ThreeLevelParams) -> Result<SteadyFidelity> {
    p.validate()?;
    if !(p.kappa > 0.0) {
        return Err(Error::InvalidParameter("kappa must be positive".into()));
    }
    let sum = p.gamma_plus + p.gamma_minus;
    if !(sum > 0.0) {
        return Err(Error::SingularRates);
    }
    let ge = p.g_eps;
    let gc = p.coherence_decay();
    let c = (p.gamma_minus / sum)
        / (2.0 * ge / p.kappa + (2.0 * ge / sum) * (1.0 + p.gamma_minus / p.kappa) + gc / ge);
    let f2 = 1.0 - (2.0 * ge / p.kappa + gc / ge) * c;
    Ok(SteadyFidelity {
        fidelity: f2.max(0.0).sqrt(),
        c,
        state: steady_three_level(p)?,
    })
}

/// `√(1 − [2gε/κ + κ/(2gε)]·γ̃⁻/(2gε))`.
pub fn approx_fidelity(g_eps: f64, kappa: f64, gamma_minus: f64) -> Result<f64> {
    if !(g_eps > 0.0 && kappa > 0.0 && gamma_minus >= 0.0) {
        return Err(Error::InvalidParameter(
            "g_eps and kappa must be positive, gamma_minus non-negative".into(),
        ));
    }
    let radicand = 1.0 - (2.0 * g_eps / kappa + kappa / (2.0 * g_eps)) * gamma_minus / (2.0 * g_eps);
    if radicand < 0.0 {
        return Err(Error::OutsideValidity(format!(
            "fidelity radicand {radicand:e} is negative"
        )));
    }
    Ok(radicand.sqrt())
}

/// First-order populations induced by `κ_th`, neglecting the coherence:
/// `ρ11⁽¹⁾ ≈ ρ33⁽¹⁾ ≈ (κ_th/κ)·ρ22⁽⁰⁾`.
pub fn first_order_thermal(p: &ThreeLevelParams, rho22_0: f64) -> (f64, f64) {
    let x = if p.kappa > 0.0 { p.kappa_th / p.kappa * rho22_0 } else { 0.0 };
    (x, x)
}

/// `√(F₀² − e^{−ħω_r/k_BT}·ρ22⁽⁰⁾)`.
pub fn thermal_fidelity(fidelity0: f64, rho22_0: f64, omega_r: f64, temperature: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&fidelity0) || !(0.0..=1.0).contains(&rho22_0) {
        return Err(Error::InvalidParameter(
            "fidelity0 and rho22_0 must lie in [0, 1]".into(),
        ));
    }
    let radicand = fidelity0 * fidelity0 - boltzmann_factor(omega_r, temperature) * rho22_0;
    if radicand < 0.0 {
        return Err(Error::OutsideValidity(
            "perturbative expression invalid at this temperature".into(),
        ));
    }
    Ok(radicand.sqrt())
}

/// Exact propagation of the four-component system, or of the reduced system
/// without qubit decoherence when `include_qubit_decoherence` is false.
pub fn three_level_dynamics(
    p: &ThreeLevelParams,
    initial: &ThreeLevelState,
    times: &[f64],
    include_qubit_decoherence: bool,
) -> Result<Vec<ThreeLevelState>> {
    initial.validate()?;
    let p = if include_qubit_decoherence { *p } else { p.without_qubit_decoherence() };
    let a = p.generator();
    let x0 = initial.vector();
    let mut out = Vec::with_capacity(times.len());
    let mut prev: Option<(f64, Vector4<f64>)> = None;
    for &t in times {
        if !t.is_finite() || t < 0.0 {
            return Err(Error::TimeGrid(format!("invalid time {t:e}")));
        }
        let x = match prev {
            Some((t0, x)) if t >= t0 => (a * (t - t0)).exp() * x,
            _ => (a * t).exp() * x0,
        };
        out.push(ThreeLevelState::from_vector(&x));
        prev = Some((t, x));
    }
    Ok(out)
}

/// Trajectory on the uniform grid `k·dt`, `k = 0..=steps`, by repeated
/// application of `exp(A·dt)`.
pub fn uniform_trajectory(
    p: &ThreeLevelParams,
    initial: &ThreeLevelState,
    dt: f64,
    steps: usize,
    include_qubit_decoherence: bool,
) -> Vec<ThreeLevelState> {
    let p = if include_qubit_decoherence { *p } else { p.without_qubit_decoherence() };
    let step = (p.generator() * dt).exp();
    let mut x = initial.vector();
    let mut out = Vec::with_capacity(steps + 1);
    out.push(*initial);
    for _ in 0..steps {
        x = step * x;
        out.push(ThreeLevelState::from_vector(&x));
    }
    out
}
