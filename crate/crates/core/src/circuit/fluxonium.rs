use ndarray::{s, Array1, Array2};
use ndarray_linalg::{Eigh, UPLO};

use crate::quantum::dagger;
use crate::{Error, Result, C64};

/// Basis sizes used by [`fluxonium_spectrum`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FluxoniumOptions {
    pub initial_basis: usize,
    pub growth: usize,
    pub max_basis: usize,
    /// Convergence threshold relative to `E₁ − E₀`.
    pub tolerance: f64,
}

impl Default for FluxoniumOptions {
    fn default() -> Self {
        Self { initial_basis: 120, growth: 20, max_basis: 400, tolerance: 1e-8 }
    }
}

/// Lowest eigenstates of `4E_c n² − E_J2 cos(φ + φ_fl) + (E_L/2)φ²`.
#[derive(Clone, Debug)]
pub struct FluxoniumSpectrum {
    /// Eigenenergies in rad/s, ascending.
    pub energies: Vec<f64>,
    /// `⟨j|n|k⟩`
    pub n: Array2<C64>,
    /// `⟨j|sin φ|k⟩`
    pub sin_phi: Array2<C64>,
    /// `⟨j|n²|j⟩`, evaluated with the untruncated `n²`.
    pub n_squared: Vec<f64>,
    /// Oscillator basis size of the returned result.
    pub basis: usize,
    /// rad/s
    pub e_j2: f64,
}

impl FluxoniumSpectrum {
    pub fn levels(&self) -> usize {
        self.energies.len()
    }

    pub fn transition(&self, j: usize, k: usize) -> f64 {
        self.energies[j] - self.energies[k]
    }
}

/// Matrix of the displacement operator `D(α) = exp(αc† − α*c)` on the first
/// `m` Fock states. Elements are exact (not a truncated exponential): for
/// `p ≥ q`, `⟨p|D|q⟩ = √(q!/p!) α^{p−q} e^{−|α|²/2} L_q^{(p−q)}(|α|²)`,
/// evaluated by a normalized Laguerre recurrence along each diagonal.
pub fn displacement(alpha: C64, m: usize) -> Array2<C64> {
    let x = alpha.norm_sqr();
    let mut d = Array2::<C64>::zeros((m, m));
    let mut pref = C64::new((-x / 2.0).exp(), 0.0);
    for k in 0..m {
        if k > 0 {
            pref *= alpha / (k as f64).sqrt();
        }
        let kf = k as f64;
        // f_q = √(k! q!/(q+k)!) L_q^{(k)}(x)
        let mut prev = 1.0;
        d[[k, 0]] = pref;
        if k + 1 < m {
            let mut cur = (1.0 + kf - x) / (kf + 1.0).sqrt();
            d[[k + 1, 1]] = pref * cur;
            for q in 1..m - k - 1 {
                let qf = q as f64;
                let next = ((2.0 * qf + 1.0 + kf - x) * cur * ((qf + 1.0) / (qf + kf + 1.0)).sqrt()
                    - (qf + kf) * prev * (qf * (qf + 1.0) / ((qf + kf) * (qf + kf + 1.0))).sqrt())
                    / (qf + 1.0);
                d[[q + 1 + k, q + 1]] = pref * next;
                prev = cur;
                cur = next;
            }
        }
    }
    // ⟨q|D(α)|p⟩ = conj⟨p|D(−α)|q⟩ and the lower triangle of D(−α) carries (−1)^{p−q}
    for p in 0..m {
        for q in 0..p {
            let sign = if (p - q) % 2 == 0 { 1.0 } else { -1.0 };
            d[[q, p]] = d[[p, q]].conj() * sign;
        }
    }
    d
}

struct Diagonalized {
    energies: Array1<f64>,
    vectors: Array2<C64>,
    n: Array2<C64>,
    sin_phi: Array2<C64>,
    n_squared: Array2<C64>,
}

fn diagonalize(e_c: f64, e_j2: f64, e_lq: f64, phi_fl: f64, m: usize) -> Result<Diagonalized> {
    let omega = (8.0 * e_c * e_lq).sqrt();
    let phi_zpf = (2.0 * e_c / e_lq).powf(0.25);
    let n_zpf = (e_lq / (32.0 * e_c)).powf(0.25);
    let disp = displacement(C64::new(0.0, phi_zpf), m);
    let disp_h = dagger(&disp);
    let shift = C64::from_polar(1.0, phi_fl);
    let mut h = (&disp * shift + &disp_h * shift.conj()) * C64::new(-e_j2 / 2.0, 0.0);
    for k in 0..m {
        h[[k, k]] += omega * (k as f64 + 0.5);
    }
    let mut c = Array2::<C64>::zeros((m, m));
    for k in 1..m {
        c[[k - 1, k]] = C64::new((k as f64).sqrt(), 0.0);
    }
    let n = (&dagger(&c) - &c) * C64::new(0.0, n_zpf);
    // −n_zpf²(c† − c)² with the top level's missing c c† term restored
    let mut n_squared = Array2::<C64>::zeros((m, m));
    for k in 0..m {
        n_squared[[k, k]] = C64::new(n_zpf * n_zpf * (2.0 * k as f64 + 1.0), 0.0);
        if k + 2 < m {
            let v = -n_zpf * n_zpf * ((k + 1) as f64 * (k + 2) as f64).sqrt();
            n_squared[[k, k + 2]] = C64::new(v, 0.0);
            n_squared[[k + 2, k]] = C64::new(v, 0.0);
        }
    }
    let sin_phi = (&disp - &disp_h) * C64::new(0.0, -0.5);
    let (energies, mut vectors) = h.eigh(UPLO::Upper)?;
    // gauge: largest component of each eigenvector real and positive
    for mut col in vectors.columns_mut() {
        let big = col.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap();
        let phase = big.conj() / big.norm();
        col.mapv_inplace(|z| z * phase);
    }
    Ok(Diagonalized { energies, vectors, n, sin_phi, n_squared })
}

fn project(op: &Array2<C64>, v: &Array2<C64>) -> Array2<C64> {
    dagger(v).dot(op).dot(v)
}

/// Fluxonium spectrum in an oscillator basis matched to `(E_c, E_Lq)`,
/// grown until the lowest `levels` eigenvalues are stable.
pub fn fluxonium_spectrum(
    e_c: f64,
    e_j2: f64,
    e_lq: f64,
    phi_fl: f64,
    levels: usize,
) -> Result<FluxoniumSpectrum> {
    fluxonium_spectrum_with(e_c, e_j2, e_lq, phi_fl, levels, &FluxoniumOptions::default())
}

pub fn fluxonium_spectrum_with(
    e_c: f64,
    e_j2: f64,
    e_lq: f64,
    phi_fl: f64,
    levels: usize,
    opts: &FluxoniumOptions,
) -> Result<FluxoniumSpectrum> {
    if levels < 4 {
        return Err(Error::InvalidParameter(format!("need at least 4 fluxonium levels, got {levels}")));
    }
    if !(e_lq > 0.0 && e_c > 0.0 && e_j2 >= 0.0) {
        return Err(Error::InvalidParameter("fluxonium needs E_c, E_Lq > 0 and E_J2 ≥ 0".into()));
    }
    if opts.initial_basis < 60.max(levels) || opts.growth == 0 {
        return Err(Error::InvalidParameter("fluxonium basis must start at 60 or more".into()));
    }
    let mut m = opts.initial_basis;
    let mut last = diagonalize(e_c, e_j2, e_lq, phi_fl, m)?;
    loop {
        let next_m = m + opts.growth;
        if next_m > opts.max_basis {
            return Err(Error::FluxoniumConvergence(opts.max_basis));
        }
        let next = diagonalize(e_c, e_j2, e_lq, phi_fl, next_m)?;
        let gap = next.energies[1] - next.energies[0];
        let shift = (0..levels)
            .map(|k| (next.energies[k] - last.energies[k]).abs())
            .fold(0.0, f64::max);
        m = next_m;
        last = next;
        if shift < opts.tolerance * gap {
            break;
        }
    }
    let v = last.vectors.slice(s![.., ..levels]).to_owned();
    let n2 = project(&last.n_squared, &v);
    Ok(FluxoniumSpectrum {
        energies: last.energies.iter().take(levels).copied().collect(),
        n: project(&last.n, &v),
        sin_phi: project(&last.sin_phi, &v),
        n_squared: (0..levels).map(|k| n2[[k, k]].re).collect(),
        basis: m,
        e_j2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::ghz;
    use approx::assert_relative_eq;

    #[test]
    fn displacement_is_unitary_on_low_block() {
        let m = 200;
        let d = displacement(C64::new(0.3, 2.2), m);
        let u = dagger(&d).dot(&d);
        for i in 0..m / 2 {
            for j in 0..m / 2 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((u[[i, j]] - e).norm() < 1e-12, "{i} {j} {}", u[[i, j]]);
            }
        }
    }

    #[test]
    fn displacement_first_column_is_coherent_state() {
        let a = C64::new(0.7, -0.4);
        let d = displacement(a, 10);
        let mut amp = C64::new((-a.norm_sqr() / 2.0).exp(), 0.0);
        for k in 0..10 {
            if k > 0 {
                amp *= a / (k as f64).sqrt();
            }
            assert!((d[[k, 0]] - amp).norm() < 1e-15);
        }
    }

    #[test]
    fn harmonic_limit() {
        let (e_c, e_l) = (ghz(4.0), ghz(0.3));
        let f = fluxonium_spectrum(e_c, 0.0, e_l, 0.0, 5).unwrap();
        let w = (8.0 * e_c * e_l).sqrt();
        for k in 0..5 {
            assert_relative_eq!(f.energies[k], w * (k as f64 + 0.5), max_relative = 1e-12);
        }
        assert_relative_eq!(f.n[[0, 1]].norm(), (e_l / (32.0 * e_c)).powf(0.25), max_relative = 1e-12);
    }

    #[test]
    fn parity_at_zero_flux() {
        let f = fluxonium_spectrum(ghz(4.0), ghz(10.0), ghz(0.3), 0.0, 6).unwrap();
        let scale = f.n[[0, 1]].norm();
        for j in 0..6 {
            for k in 0..6 {
                if (j + k) % 2 == 0 {
                    assert!(f.n[[j, k]].norm() < 1e-9 * scale);
                    assert!(f.sin_phi[[j, k]].norm() < 1e-9);
                }
            }
        }
        let gap = (f.energies[1] - f.energies[0]) / ghz(1.0);
        assert!((1.0..10.0).contains(&gap), "{gap}");
    }
}
