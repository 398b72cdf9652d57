use ndarray::Array2;

use super::params::SystemParams;
use super::plan::DrivePlan;
use crate::quantum::{
    dagger, make_ladder, CollapseChannel, HilbertSpace, LindbladModel, Operator,
};
use crate::units::boltzmann_factor;
use crate::{Error, Result, C64};

fn sideband_matrices(space: HilbertSpace) -> Result<Sidebands> {
    let l = make_ladder(space)?;
    let ad = l.a_dagger.matrix();
    Ok(Sidebands {
        blue: ad.dot(l.sigma_plus.matrix()),
        red: ad.dot(l.sigma_minus.matrix()),
        a_dagger_sz: ad.dot(l.sigma_z.matrix()),
        stark: l.sigma_z.matrix().dot(&l.number()),
    })
}

/// `a†σ⁺`, `a†σ⁻`, `a†σ_z` and `σ_z a†a`.
struct Sidebands {
    blue: Array2<C64>,
    red: Array2<C64>,
    a_dagger_sz: Array2<C64>,
    stark: Array2<C64>,
}

/// `X + X†`
fn plus_hc(x: Array2<C64>) -> Array2<C64> {
    let xd = dagger(&x);
    x + xd
}

fn longitudinal(s: &Sidebands, params: &SystemParams, plan: &DrivePlan) -> Array2<C64> {
    let c = C64::from_polar(-params.g_prime * plan.xi, -plan.nu3);
    plus_hc(s.a_dagger_sz.mapv(|z| z * c))
}

/// Rotating-frame Hamiltonian
/// `gε₁(a†σ⁻e^{−iν₁} + h.c.) + gε₂(a†σ⁺e^{−iν₂} + h.c.) − g′ξ(a†e^{−iν₃} + h.c.)σ_z`,
/// optionally with the Stark term `−χσ_z a†a`.
pub fn build_rotating_hamiltonian(
    params: &SystemParams,
    plan: &DrivePlan,
    space: HilbertSpace,
    include_stark: bool,
) -> Result<Operator> {
    plan.check(params)?;
    let s = sideband_matrices(space)?;
    let red = C64::from_polar(params.g * plan.eps1, -plan.nu1);
    let blue = C64::from_polar(params.g * plan.eps2, -plan.nu2);
    let mut h = plus_hc(s.red.mapv(|z| z * red)) + plus_hc(s.blue.mapv(|z| z * blue));
    h += &longitudinal(&s, params, plan);
    if include_stark {
        h.scaled_add(C64::new(-params.chi, 0.0), &s.stark);
    }
    Operator::hamiltonian(space, h)
}

/// `(a, κ)`, `(σ⁻, γ)`, `(σ_z, Γφ/2)`, `(a†, κ_th)`, `(σ⁺, γ_th)` with the
/// upward rates set by Boltzmann factors at `ω_r` and `ω_q`.
pub fn thermal_channels(params: &SystemParams, space: HilbertSpace) -> Result<Vec<CollapseChannel>> {
    let l = make_ladder(space)?;
    let kappa_th = params.kappa * boltzmann_factor(params.omega_r, params.temperature);
    let gamma_th = params.gamma * boltzmann_factor(params.omega_q, params.temperature);
    Ok(vec![
        CollapseChannel::new(l.a, params.kappa)?,
        CollapseChannel::new(l.sigma_minus, params.gamma)?,
        CollapseChannel::new(l.sigma_z, params.gamma_phi / 2.0)?,
        CollapseChannel::new(l.a_dagger, kappa_th)?,
        CollapseChannel::new(l.sigma_plus, gamma_th)?,
    ])
}

/// Rotating-frame Hamiltonian plus all thermal channels.
pub fn stabilization_model(
    params: &SystemParams,
    plan: &DrivePlan,
    space: HilbertSpace,
    include_stark: bool,
) -> Result<LindbladModel> {
    params.validate()?;
    let h = build_rotating_hamiltonian(params, plan, space, include_stark)?;
    LindbladModel::new(h, thermal_channels(params, space)?)
}

/// Time-dependent Hamiltonian before the rotating-wave approximation:
/// `g(t)(a†e^{iω_r t} + h.c.)(σ⁺e^{iω_q t} + h.c.) − χσ_z a†a` with
/// `g(t) = g(2ε₁cos(ω₁t + ν₁) + 2ε₂cos(ω₂t + ν₂))`, plus the longitudinal
/// drive term in its rotating-frame form.
#[derive(Clone, Debug)]
pub struct LabFrameGenerator {
    space: HilbertSpace,
    params: SystemParams,
    plan: DrivePlan,
    blue: Array2<C64>,
    red: Array2<C64>,
    static_part: Array2<C64>,
}

/// Complex coefficients of `a†σ⁺` and `a†σ⁻` at time `t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LabCoefficients {
    pub blue: C64,
    pub red: C64,
}

impl LabFrameGenerator {
    pub fn new(params: &SystemParams, plan: &DrivePlan, space: HilbertSpace) -> Result<Self> {
        plan.check(params)?;
        let s = sideband_matrices(space)?;
        let mut static_part = longitudinal(&s, params, plan);
        static_part.scaled_add(C64::new(-params.chi, 0.0), &s.stark);
        Ok(Self {
            space,
            params: *params,
            plan: *plan,
            blue: s.blue,
            red: s.red,
            static_part,
        })
    }

    pub fn space(&self) -> HilbertSpace {
        self.space
    }

    /// `g(t)` in rad/s.
    pub fn coupling(&self, t: f64) -> f64 {
        let p = &self.plan;
        self.params.g
            * (2.0 * p.eps1 * (p.omega1 * t + p.nu1).cos()
                + 2.0 * p.eps2 * (p.omega2 * t + p.nu2).cos())
    }

    pub fn coefficients(&self, t: f64) -> LabCoefficients {
        let g = self.coupling(t);
        let (wr, wq) = (self.params.omega_r, self.params.omega_q);
        LabCoefficients {
            blue: C64::from_polar(g, (wr + wq) * t),
            red: C64::from_polar(g, (wr - wq) * t),
        }
    }

    pub fn matrix(&self, t: f64) -> Array2<C64> {
        let c = self.coefficients(t);
        let x = self.blue.mapv(|z| z * c.blue) + self.red.mapv(|z| z * c.red);
        plus_hc(x) + &self.static_part
    }

    /// Highest angular frequency appearing in `matrix(t)`.
    pub fn fastest_frequency(&self) -> f64 {
        let (wr, wq) = (self.params.omega_r, self.params.omega_q);
        let p = &self.plan;
        let carriers = [(wr + wq).abs(), (wr - wq).abs()];
        let tones = [p.omega1.abs(), p.omega2.abs()];
        let mut m = 0.0_f64;
        for c in carriers {
            for w in tones {
                m = m.max(c + w);
            }
        }
        m
    }
}

/// Lab-frame Hamiltonian at time `t` as an [`Operator`].
pub fn build_lab_frame_generator(
    params: &SystemParams,
    plan: &DrivePlan,
    space: HilbertSpace,
    t: f64,
) -> Result<Operator> {
    let gen = LabFrameGenerator::new(params, plan, space)?;
    Operator::hamiltonian(space, gen.matrix(t))
}

/// Default `h·ω_max` for lab-frame integration.
pub const LAB_STEP_PHASE: f64 = 0.5;
/// Largest accepted `h·ω_max`.
pub const LAB_STEP_PHASE_MAX: f64 = 1.0;

pub fn check_lab_step(gen: &LabFrameGenerator, step: f64) -> Result<()> {
    let omega = gen.fastest_frequency();
    if !(step > 0.0) || step * omega > LAB_STEP_PHASE_MAX {
        return Err(Error::CoarseStep { step, omega });
    }
    Ok(())
}
