use ndarray::Array2;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::hamiltonian::stabilization_model;
use super::params::{StabilizationTarget, SystemParams};
use crate::quantum::{
    axis_projection, build_lindblad_generator, fidelity_and_expectations, qubit,
    steady_state_with, HilbertSpace, SteadyStateOptions,
};
use crate::units::wrap_phase;
use crate::{Error, Result, C64};

/// Below this `|sinθ|` the longitudinal drive is treated as off.
const SIN_EPS: f64 = 1e-12;
/// Phase-matching tolerance on `ν₁ + ν₂ − 2ν₃`.
pub const PHASE_TOL: f64 = 1e-12;

/// `σ⁺_n̂` and `σ⁻_n̂` as 2×2 matrices in the `(g, e)` basis.
pub fn sigma_n_ladder(theta: f64, phi: f64) -> (Array2<C64>, Array2<C64>) {
    let (c, s) = (theta.cos(), theta.sin());
    let plus = qubit::sigma_plus().mapv(|z| z * C64::from_polar(0.5 * (c + 1.0), -phi))
        + qubit::sigma_minus().mapv(|z| z * C64::from_polar(0.5 * (c - 1.0), phi))
        - qubit::sigma_z().mapv(|z| z * 0.5 * s);
    let minus = plus.t().mapv(|z| z.conj());
    (plus, minus)
}

/// Amplitudes and phases of the red, blue and longitudinal tones.
///
/// `eps1` and `eps2` are signed so that `ν₁ + ν₂ − 2ν₃ = 0` holds literally;
/// [`DrivePlan::tones`] gives the equivalent non-negative modulation depths.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DrivePlan {
    pub eps1: f64,
    pub eps2: f64,
    /// rad/s
    pub xi: f64,
    pub nu1: f64,
    pub nu2: f64,
    pub nu3: f64,
    pub omega1: f64,
    pub omega2: f64,
    pub omega3: f64,
    /// Ratio of effective red to blue strength used for mixed targets.
    pub red_ratio: f64,
}

/// A physical tone: non-negative amplitude, frequency (rad/s), phase.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tone {
    pub amplitude: f64,
    pub frequency: f64,
    pub phase: f64,
}

impl DrivePlan {
    pub fn check(&self, params: &SystemParams) -> Result<()> {
        let scale = params.omega_r + params.omega_q;
        let tol = 1e-12 * scale;
        let want = [
            ("omega1", self.omega1, params.omega_r - params.omega_q),
            ("omega2", self.omega2, params.omega_r + params.omega_q),
            ("omega3", self.omega3, params.omega_r),
        ];
        for (name, got, expected) in want {
            if !((got - expected).abs() <= tol) {
                return Err(Error::PlanMismatch(format!(
                    "{name} = {got:e} rad/s, expected {expected:e}"
                )));
            }
        }
        let mismatch = wrap_phase(self.nu1 + self.nu2 - 2.0 * self.nu3);
        if !(mismatch.abs() <= PHASE_TOL) {
            return Err(Error::PlanMismatch(format!("nu1 + nu2 - 2 nu3 = {mismatch:e}")));
        }
        Ok(())
    }

    /// Red, blue and Rabi tones with signs moved into the phases.
    pub fn tones(&self) -> [Tone; 3] {
        let tone = |amp: f64, frequency: f64, phase: f64| Tone {
            amplitude: amp.abs(),
            frequency,
            phase: if amp < 0.0 { wrap_phase(phase + PI) } else { wrap_phase(phase) },
        };
        [
            tone(self.eps1, self.omega1, self.nu1),
            tone(self.eps2, self.omega2, self.nu2),
            tone(self.xi, self.omega3, self.nu3),
        ]
    }

    /// `(ν₂ − ν₁)/2`, the azimuth the plan stabilizes.
    pub fn azimuth(&self) -> f64 {
        wrap_phase(0.5 * (self.nu2 - self.nu1))
    }
}

fn pure_plan(
    theta: f64,
    phi: f64,
    g_blue: f64,
    g_red: f64,
    params: &SystemParams,
) -> Result<DrivePlan> {
    let (c, s) = (theta.cos(), theta.sin());
    let g_eps1 = 0.5 * (g_blue * (c - 1.0) + g_red * (c + 1.0));
    let g_eps2 = 0.5 * (g_blue * (c + 1.0) + g_red * (c - 1.0));
    let g_xi = if s.abs() < SIN_EPS { 0.0 } else { 0.5 * s * (g_blue + g_red) };
    if g_xi != 0.0 && params.g_prime <= 0.0 {
        return Err(Error::LongitudinalUnavailable);
    }
    Ok(DrivePlan {
        eps1: g_eps1 / params.g,
        eps2: g_eps2 / params.g,
        xi: if g_xi == 0.0 { 0.0 } else { g_xi / params.g_prime },
        nu1: wrap_phase(-phi),
        nu2: wrap_phase(phi),
        nu3: 0.0,
        omega1: params.omega_r - params.omega_q,
        omega2: params.omega_r + params.omega_q,
        omega3: params.omega_r,
        red_ratio: if g_blue > 0.0 { g_red / g_blue } else { 0.0 },
    })
}

/// Resonator truncation used by the mixed-target root-find.
pub const MIX_SEARCH_LEVELS: usize = 10;

/// Drive plan realizing `target` with effective blue-sideband strength `g_eps`.
///
/// For `mix < 1` an effective red sideband of strength `r·g_eps` is mixed in,
/// with `r` found by bisection on the steady-state Bloch length along `n̂`.
pub fn plan_drives(
    target: &StabilizationTarget,
    g_eps: f64,
    params: &SystemParams,
) -> Result<DrivePlan> {
    target.validate()?;
    params.validate()?;
    if !(g_eps.is_finite() && g_eps > 0.0) {
        return Err(Error::InvalidParameter(format!("g_eps must be positive, got {g_eps}")));
    }
    if !(params.g > 0.0) {
        return Err(Error::InvalidParameter("coupling g must be positive to plan drives".into()));
    }
    let plan = |r: f64| pure_plan(target.theta, target.phi, g_eps, r * g_eps, params);
    if target.mix >= 1.0 {
        return plan(0.0);
    }

    let space = HilbertSpace::new(MIX_SEARCH_LEVELS)?;
    let radius = |r: f64| -> Result<f64> {
        let model = stabilization_model(params, &plan(r)?, space, true)?;
        let rho = steady_state_with(
            &build_lindblad_generator(&model),
            SteadyStateOptions { check_uniqueness: false },
        )?;
        let rep = fidelity_and_expectations(&rho, target.theta, target.phi);
        Ok(axis_projection(&rep, target.theta, target.phi))
    };

    let top = radius(0.0)?;
    if target.mix >= top {
        log::warn!(
            "requested Bloch length {} exceeds the pure-target value {top:.5}; using the pure plan",
            target.mix
        );
        return plan(0.0);
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while radius(hi)? > target.mix {
        lo = hi;
        hi *= 2.0;
        if hi > 64.0 {
            return Err(Error::InvalidParameter(format!(
                "Bloch length {} not reachable by red-sideband admixture",
                target.mix
            )));
        }
    }
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if radius(mid)? > target.mix {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-9 {
            break;
        }
    }
    plan(0.5 * (lo + hi))
}

/// Three tones from the product of `cos(ω_q t + υ₁)` and `cos(ω_r t + υ₂)`,
/// plus the second source itself. Returns `(frequency, phase)` pairs.
pub fn synthesize_tones(upsilon1: f64, upsilon2: f64, omega_q: f64, omega_r: f64) -> [(f64, f64); 3] {
    [
        (omega_r - omega_q, upsilon2 - upsilon1),
        (omega_r + omega_q, upsilon2 + upsilon1),
        (omega_r, upsilon2),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn max_diff(a: &Array2<C64>, b: &Array2<C64>) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn north_pole_is_sigma_plus() {
        let (p, m) = sigma_n_ladder(0.0, 0.0);
        assert!(max_diff(&p, &qubit::sigma_plus()) < 1e-15);
        assert!(max_diff(&m, &qubit::sigma_minus()) < 1e-15);
    }

    #[test]
    fn south_pole_is_minus_sigma_minus() {
        let (p, _) = sigma_n_ladder(PI, 0.0);
        assert!(max_diff(&p, &qubit::sigma_minus().mapv(|z| -z)) < 1e-15);
    }

    #[test]
    fn equator_expansion() {
        let (p, _) = sigma_n_ladder(PI / 2.0, 0.0);
        let expected = (qubit::sigma_plus() - qubit::sigma_minus() - qubit::sigma_z()).mapv(|z| z * 0.5);
        assert!(max_diff(&p, &expected) < 1e-15);
    }

    #[test]
    fn raises_minus_n_to_n() {
        for (theta, phi) in [(0.4, 1.3), (2.2, 5.0), (PI / 2.0, 0.0)] {
            let (p, _) = sigma_n_ladder(theta, phi);
            let plus = qubit::bloch_ket(theta, phi);
            // |−n̂⟩ = cos(θ/2)|g⟩ − e^{−iφ} sin(θ/2)|e⟩
            let minus = [
                C64::new((theta / 2.0).cos(), 0.0),
                -C64::from_polar((theta / 2.0).sin(), -phi),
            ];
            for i in 0..2 {
                let v = p[[i, 0]] * minus[0] + p[[i, 1]] * minus[1];
                assert!((v - plus[i]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn pole_plans() {
        let p = SystemParams::reference();
        let g_eps = crate::units::mhz(2.0);
        let t = StabilizationTarget::pure(0.0, 0.0).unwrap();
        let plan = plan_drives(&t, g_eps, &p).unwrap();
        assert_eq!(plan.eps1, 0.0);
        assert_abs_diff_eq!(plan.eps2 * p.g, g_eps, epsilon = 1e-6);
        assert_eq!(plan.xi, 0.0);

        let t = StabilizationTarget::pure(PI, 0.0).unwrap();
        let plan = plan_drives(&t, g_eps, &p).unwrap();
        assert_abs_diff_eq!(plan.eps2, 0.0, epsilon = 1e-15);
        assert_eq!(plan.xi, 0.0);
        let [red, blue, _] = plan.tones();
        assert_abs_diff_eq!(red.amplitude * p.g, g_eps, epsilon = 1e-6);
        assert_abs_diff_eq!(red.phase.abs(), PI, epsilon = 1e-12);
        assert_abs_diff_eq!(blue.amplitude, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn equatorial_plan_with_azimuth() {
        let p = SystemParams::reference();
        let g_eps = crate::units::mhz(2.0);
        let t = StabilizationTarget::pure(PI / 2.0, PI / 3.0).unwrap();
        let plan = plan_drives(&t, g_eps, &p).unwrap();
        assert_abs_diff_eq!(plan.eps1 * p.g, -g_eps / 2.0, epsilon = 1e-6);
        assert_abs_diff_eq!(plan.eps2 * p.g, g_eps / 2.0, epsilon = 1e-6);
        assert_abs_diff_eq!(plan.xi * p.g_prime, g_eps / 2.0, epsilon = 1e-6);
        assert_abs_diff_eq!(plan.azimuth(), PI / 3.0, epsilon = 1e-12);
        plan.check(&p).unwrap();
    }

    #[test]
    fn longitudinal_required_off_axis() {
        let mut p = SystemParams::reference();
        p.g_prime = 0.0;
        let t = StabilizationTarget::pure(1.0, 0.0).unwrap();
        assert!(matches!(
            plan_drives(&t, 1e7, &p),
            Err(Error::LongitudinalUnavailable)
        ));
        let t = StabilizationTarget::pure(0.0, 0.0).unwrap();
        assert!(plan_drives(&t, 1e7, &p).is_ok());
    }

    #[test]
    fn check_flags_frequency_and_phase_errors() {
        let p = SystemParams::reference();
        let t = StabilizationTarget::pure(1.0, 0.5).unwrap();
        let plan = plan_drives(&t, 1e7, &p).unwrap();
        let mut bad = plan;
        bad.omega2 *= 1.001;
        assert!(matches!(bad.check(&p), Err(Error::PlanMismatch(_))));
        let mut bad = plan;
        bad.nu1 += 0.1;
        assert!(matches!(bad.check(&p), Err(Error::PlanMismatch(_))));
    }

    #[test]
    fn synthesized_tones() {
        let (wq, wr) = (3.0, 2.0);
        let t = synthesize_tones(0.0, 0.0, wq, wr);
        assert!(t.iter().all(|&(_, ph)| ph == 0.0));
        let phi = 0.7;
        let [(w1, n1), (w2, n2), (w3, n3)] = synthesize_tones(phi, 0.0, wq, wr);
        assert_eq!((w1, w2, w3), (wr - wq, wr + wq, wr));
        assert_abs_diff_eq!((n2 - n1) / 2.0, phi, epsilon = 1e-15);
        assert_abs_diff_eq!(n1 + n2 - 2.0 * n3, 0.0, epsilon = 1e-15);
    }
}
