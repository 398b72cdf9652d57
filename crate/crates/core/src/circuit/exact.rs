use ndarray::{linalg::kron, Array2};
use ndarray_linalg::{Eigh, UPLO};
use serde::Serialize;

use super::dressed::DressedParams;
use super::modes::BareModes;
use crate::quantum::{annihilation, dagger};
use crate::{Error, Result, C64};

/// Minimum squared overlap accepted when labeling a dressed level.
pub const MIN_LABEL_OVERLAP: f64 = 0.7;

/// Fock truncations of modes a and b and the number of fluxonium levels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Truncation {
    pub na: usize,
    pub nb: usize,
    pub nq: usize,
}

impl Default for Truncation {
    fn default() -> Self {
        Self { na: 6, nb: 4, nq: 6 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ResonatorQubit {
    pub omega_r: f64,
    pub omega_q: f64,
    pub chi: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExactComparison {
    pub exact: ResonatorQubit,
    pub perturbative: ResonatorQubit,
    /// Absolute discrepancies, rad/s.
    pub error: ResonatorQubit,
    /// Smallest squared overlap among the four labeled levels.
    pub min_overlap: f64,
}

/// Dense three-mode Hamiltonian on `a ⊗ b ⊗ qubit`.
pub fn three_mode_hamiltonian(m: &BareModes, t: Truncation) -> Result<Array2<C64>> {
    if t.na < 4 || t.nb < 4 || t.nq < 4 {
        return Err(Error::InvalidParameter(format!("truncations must be ≥ 4, got {t:?}")));
    }
    if t.nq > m.levels() {
        return Err(Error::InvalidParameter(format!(
            "qubit truncation {} exceeds the {} available fluxonium levels",
            t.nq,
            m.levels()
        )));
    }
    let m = m.truncated(t.nq);
    let (ia, ib, iq) = (Array2::<C64>::eye(t.na), Array2::<C64>::eye(t.nb), Array2::<C64>::eye(t.nq));
    let three = |x: &Array2<C64>, y: &Array2<C64>, z: &Array2<C64>| kron(&kron(x, y), z);
    let a = annihilation(t.na);
    let b = annihilation(t.nb);
    let (ad, bd) = (dagger(&a), dagger(&b));
    let i = C64::new(0.0, 1.0);
    let num_a = ad.dot(&a).mapv(|z| z * m.omega_a);
    let num_b = bd.dot(&b).mapv(|z| z * m.omega_b);
    let mut eq = Array2::<C64>::zeros((t.nq, t.nq));
    for (k, e) in m.energies.iter().enumerate() {
        eq[[k, k]] = C64::new(*e, 0.0);
    }
    let h = three(&num_a, &ib, &iq)
        + three(&ia, &num_b, &iq)
        + three(&ia, &ib, &eq)
        + three(&(&ad - &a).mapv(|z| z * i), &ib, &m.g_a)
        + three(&ia, &(&bd - &b).mapv(|z| z * i), &m.g_b)
        + three(&(&a + &ad), &(&b + &bd), &iq).mapv(|z| z * m.omega_ab);
    Ok(h)
}

/// Diagonalizes the three-mode Hamiltonian and compares the resonator and
/// qubit frequencies and `χ` with the perturbative values.
pub fn verify_dressed_vs_exact(
    m: &BareModes,
    dressed: &DressedParams,
    t: Truncation,
) -> Result<ExactComparison> {
    let h = three_mode_hamiltonian(m, t)?;
    let (values, vectors) = h.eigh(UPLO::Upper)?;
    let level = |na: usize, q: usize| -> Result<(f64, f64)> {
        let row = (na * t.nb) * t.nq + q;
        let (best, overlap) = vectors
            .row(row)
            .iter()
            .map(|z| z.norm_sqr())
            .enumerate()
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .expect("non-empty spectrum");
        if overlap < MIN_LABEL_OVERLAP {
            return Err(Error::Labeling { label: format!("|{na},0,{q}>"), overlap });
        }
        Ok((values[best], overlap))
    };
    let (e00, o1) = level(0, 0)?;
    let (e01, o2) = level(0, 1)?;
    let (e10, o3) = level(1, 0)?;
    let (e11, o4) = level(1, 1)?;
    let exact = ResonatorQubit {
        omega_r: 0.5 * ((e10 - e00) + (e11 - e01)),
        omega_q: e01 - e00,
        chi: 0.5 * ((e10 - e00) - (e11 - e01)),
    };
    let perturbative =
        ResonatorQubit { omega_r: dressed.omega_r, omega_q: dressed.omega_q, chi: dressed.chi };
    let error = ResonatorQubit {
        omega_r: (exact.omega_r - perturbative.omega_r).abs(),
        omega_q: (exact.omega_q - perturbative.omega_q).abs(),
        chi: (exact.chi - perturbative.chi).abs(),
    };
    Ok(ExactComparison { exact, perturbative, error, min_overlap: o1.min(o2).min(o3).min(o4) })
}
