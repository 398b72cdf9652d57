use ndarray::{s, Array2};
use serde::Serialize;

use super::fluxonium::FluxoniumSpectrum;
use super::modes::BareModes;
use crate::{Error, Result, C64};

/// Relative threshold (in units of `Ω_b`) for near-resonant denominators.
pub const RESONANCE_TOL: f64 = 1e-3;
/// Fluxonium levels kept in the perturbative sums.
pub const DEFAULT_QUBIT_LEVELS: usize = 6;

/// Dressed resonator and qubit parameters.
#[derive(Clone, Debug, Serialize)]
pub struct DressedParams {
    pub omega_r: f64,
    pub omega_q: f64,
    pub chi: f64,
    pub g: f64,
    /// Dimensionless; multiplies ξ (rad/s).
    pub g_prime: f64,
    pub eta_a: f64,
    #[serde(skip)]
    pub eta_jk: Array2<C64>,
    /// Rabi drive strength produced by `d₃`, rad/s.
    pub xi: f64,
    /// Normal-mode frequencies of the resonator-like and coupler-like modes.
    pub omega_a_dressed: f64,
    pub omega_b_dressed: f64,
    pub qubit_levels: usize,
}

impl DressedParams {
    /// JSON document with an explicit unit per field.
    pub fn to_json(&self) -> serde_json::Value {
        let q = |v: f64, unit: &str| serde_json::json!({ "value": v, "unit": unit });
        let part = |f: fn(&C64) -> f64| -> Vec<Vec<f64>> {
            self.eta_jk.rows().into_iter().map(|r| r.iter().map(f).collect()).collect()
        };
        serde_json::json!({
            "omega_r": q(self.omega_r, "rad/s"),
            "omega_q": q(self.omega_q, "rad/s"),
            "chi": q(self.chi, "rad/s"),
            "g": q(self.g, "rad/s"),
            "g_prime": q(self.g_prime, "1"),
            "eta_a": q(self.eta_a, "1"),
            "eta_jk": { "re": part(|z| z.re), "im": part(|z| z.im), "unit": "1" },
            "xi": q(self.xi, "rad/s"),
            "omega_a_dressed": q(self.omega_a_dressed, "rad/s"),
            "omega_b_dressed": q(self.omega_b_dressed, "rad/s"),
            "qubit_levels": self.qubit_levels,
        })
    }
}

/// Normal modes of `Ω_a a†a + Ω_b b†b + Ω_ab(a+a†)(b+b†)`.
#[derive(Clone, Debug)]
pub struct NormalModes {
    /// `[ω_A, ω_B]`, A being the mode with the larger weight on a.
    pub frequencies: [f64; 2],
    /// Couplings `G_A`, `G_B` in `Σ_μ i(A_μ† − A_μ) ⊗ G_μ`.
    pub couplings: [Array2<C64>; 2],
}

pub fn normal_modes(m: &BareModes) -> Result<NormalModes> {
    let (oa, ob) = (m.omega_a, m.omega_b);
    let off = 2.0 * m.omega_ab * (oa * ob).sqrt();
    let (p, q) = (oa * oa, ob * ob);
    let mean = 0.5 * (p + q);
    let rad = (0.25 * (p - q) * (p - q) + off * off).sqrt();
    let w2 = [mean - rad, mean + rad];
    if w2[0] <= 0.0 {
        return Err(Error::OutsideValidity("a-b coupling destabilizes the lower normal mode".into()));
    }
    // orthonormal eigenvectors (components on a, b) of [[p, off], [off, q]]
    let vec = |lam: f64| -> [f64; 2] {
        let (x, y) = if off == 0.0 {
            if (lam - p).abs() <= (lam - q).abs() { (1.0, 0.0) } else { (0.0, 1.0) }
        } else if (lam - p).abs() > (lam - q).abs() {
            (off, lam - p)
        } else {
            (lam - q, off)
        };
        let norm = x.hypot(y);
        [x / norm, y / norm]
    };
    let mut modes = [(w2[0].sqrt(), vec(w2[0])), (w2[1].sqrt(), vec(w2[1]))];
    if modes[0].1[0].abs() < modes[1].1[0].abs() {
        modes.swap(0, 1);
    }
    let coupling = |w: f64, o: [f64; 2]| -> Array2<C64> {
        m.g_a.mapv(|z| z * (o[0] * (w / oa).sqrt())) + m.g_b.mapv(|z| z * (o[1] * (w / ob).sqrt()))
    };
    Ok(NormalModes {
        frequencies: [modes[0].0, modes[1].0],
        couplings: [coupling(modes[0].0, modes[0].1), coupling(modes[1].0, modes[1].1)],
    })
}

fn check(kind: &'static str, j: usize, k: usize, value: f64, bound: f64) -> Result<f64> {
    if value.abs() <= bound {
        Err(Error::NearResonance { kind, j, k, value })
    } else {
        Ok(value)
    }
}

/// Bogoliubov diagonalization of the a-b pair followed by second-order
/// perturbation theory in the qubit couplings.
pub fn dressed_params(m: &BareModes, flux: &FluxoniumSpectrum, d3: f64) -> Result<DressedParams> {
    let l = DEFAULT_QUBIT_LEVELS.min(m.levels());
    let out = dressed_params_with(m, flux, d3, l)?;
    if m.levels() >= l + 2 {
        match dressed_params_with(m, flux, d3, l + 2) {
            Ok(wider) => {
                let shift = (wider.chi - out.chi).abs();
                if shift > 1e-2 * out.chi.abs() {
                    log::warn!("dispersive shift changes by {shift:e} rad/s with {} qubit levels", l + 2);
                }
            }
            Err(e) => log::warn!("qubit-level convergence check skipped: {e}"),
        }
    }
    Ok(out)
}

pub fn dressed_params_with(
    m: &BareModes,
    flux: &FluxoniumSpectrum,
    d3: f64,
    levels: usize,
) -> Result<DressedParams> {
    if levels < 2 || levels > m.levels() || levels > flux.levels() {
        return Err(Error::InvalidParameter(format!(
            "qubit truncation {levels} outside [2, {}]",
            m.levels().min(flux.levels())
        )));
    }
    let m = m.truncated(levels);
    let e = &m.energies;
    let (oa, ob) = (m.omega_a, m.omega_b);
    let tol = RESONANCE_TOL * ob;
    check("Delta_ab", 0, 0, ob - oa, tol)?;
    check("Sigma_ab", 0, 0, ob + oa, tol)?;

    let nm = normal_modes(&m)?;
    let [w_a, w_b] = nm.frequencies;
    for (mu, w) in [w_a, w_b].into_iter().enumerate() {
        let kind = if mu == 0 { "E_j-E_k-Omega_A" } else { "E_j-E_k-Omega_B" };
        for j in 0..2 {
            for k in 0..levels {
                check(kind, j, k, e[j] - e[k] - w, tol)?;
                check(kind, j, k, e[j] - e[k] + w, tol)?;
            }
        }
    }
    let chi_j = |j: usize| -> f64 {
        (0..levels)
            .map(|k| {
                let d = e[j] - e[k];
                nm.couplings[0][[k, j]].norm_sqr() * (1.0 / (d - w_a) + 1.0 / (d + w_a))
            })
            .sum()
    };
    let lamb = |j: usize| -> f64 {
        (0..2)
            .flat_map(|mu| (0..levels).map(move |k| (mu, k)))
            .map(|(mu, k)| {
                nm.couplings[mu][[k, j]].norm_sqr() / (e[j] - e[k] - nm.frequencies[mu])
            })
            .sum()
    };
    let (chi0, chi1) = (chi_j(0), chi_j(1));
    let omega_r = w_a + 0.5 * (chi0 + chi1);
    let omega_q = (e[1] + lamb(1)) - (e[0] + lamb(0));
    let chi = 0.5 * (chi0 - chi1);

    let eta_a = -2.0 * ob * m.omega_ab / (ob * ob - oa * oa);
    let i = C64::new(0.0, 1.0);
    let delta_b = |k: usize, j: usize| ob - (e[k] - e[j]);
    let mut eta_jk = Array2::<C64>::zeros((levels, levels));
    for j in 0..levels {
        for k in 0..levels {
            let dkj = check("Delta_b", k, j, delta_b(k, j), tol)?;
            let djk = check("Delta_b", j, k, delta_b(j, k), tol)?;
            eta_jk[[j, k]] = i * m.g_b[[k, j]] / dkj - i * m.g_b[[j, k]] / djk;
        }
    }
    let g = (2.0 * eta_a * eta_jk[[0, 1]] * m.mod_scale).norm();

    let f = flux.sin_phi.slice(s![..levels, ..levels]);
    let delta_a = |j: usize, k: usize| oa - (e[j] - e[k]);
    let alpha = |q: usize| -> Result<C64> {
        let mut acc = C64::new(0.0, 0.0);
        for j in 0..levels {
            let d_qj = check("Delta_a", q, j, delta_a(q, j), tol)?;
            let d_jq = check("Delta_a", j, q, delta_a(j, q), tol)?;
            acc += f[[j, q]] * (-i * m.g_a[[q, j]] / d_qj) - f[[q, j]] * (-i * m.g_a[[j, q]] / d_jq);
        }
        Ok(acc)
    };
    let f01 = f[[0, 1]];
    let g_prime = if f01.norm() > 0.0 { ((alpha(0)? - alpha(1)?) / (2.0 * f01)).norm() } else { 0.0 };
    let xi = 0.5 * flux.e_j2 * d3 * f01.norm();

    Ok(DressedParams {
        omega_r,
        omega_q,
        chi,
        g,
        g_prime,
        eta_a,
        eta_jk,
        xi,
        omega_a_dressed: w_a,
        omega_b_dressed: w_b,
        qubit_levels: levels,
    })
}
