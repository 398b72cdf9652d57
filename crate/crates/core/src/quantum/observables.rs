use ndarray::Array2;

use super::ladder::qubit::bloch_ket;
use super::space::DensityMatrix;
use crate::C64;

/// `Σ_m ⟨m|ρ|m⟩` over the resonator factor; 2×2 in the `(g, e)` basis.
pub fn partial_trace_qubit(rho: &DensityMatrix) -> Array2<C64> {
    let n = rho.space().resonator_levels();
    let m = rho.matrix();
    Array2::from_shape_fn((2, 2), |(p, q)| (0..n).map(|k| m[[p * n + k, q * n + k]]).sum())
}

/// Photon-number distribution traced over the qubit.
pub fn photon_distribution(rho: &DensityMatrix) -> Vec<f64> {
    let n = rho.space().resonator_levels();
    let m = rho.matrix();
    (0..n).map(|k| m[[k, k]].re + m[[n + k, n + k]].re).collect()
}

pub fn photon_number(rho: &DensityMatrix) -> f64 {
    photon_distribution(rho)
        .iter()
        .enumerate()
        .map(|(k, p)| k as f64 * p)
        .sum()
}

/// Pauli expectations of a reduced qubit state.
pub fn bloch_vector(rho_q: &Array2<C64>) -> [f64; 3] {
    [
        2.0 * rho_q[[1, 0]].re,
        2.0 * rho_q[[0, 1]].im,
        rho_q[[1, 1]].re - rho_q[[0, 0]].re,
    ]
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitReport {
    /// `√⟨n̂|ρ_q|n̂⟩`
    pub fidelity: f64,
    pub sx: f64,
    pub sy: f64,
    pub sz: f64,
}

/// Population of `|n̂(θ, φ)⟩` in a reduced qubit state.
pub fn target_population(rho_q: &Array2<C64>, theta: f64, phi: f64) -> f64 {
    let ket = bloch_ket(theta, phi);
    let mut p = C64::new(0.0, 0.0);
    for i in 0..2 {
        for j in 0..2 {
            p += ket[i].conj() * rho_q[[i, j]] * ket[j];
        }
    }
    p.re
}

pub fn fidelity_and_expectations(rho: &DensityMatrix, theta: f64, phi: f64) -> QubitReport {
    let rq = partial_trace_qubit(rho);
    let [sx, sy, sz] = bloch_vector(&rq);
    QubitReport {
        fidelity: target_population(&rq, theta, phi).max(0.0).sqrt(),
        sx,
        sy,
        sz,
    }
}

/// `⟨σ_n̂⟩ = n̂·(sx, sy, sz)`.
pub fn axis_projection(report: &QubitReport, theta: f64, phi: f64) -> f64 {
    theta.sin() * phi.cos() * report.sx + theta.sin() * phi.sin() * report.sy + theta.cos() * report.sz
}
