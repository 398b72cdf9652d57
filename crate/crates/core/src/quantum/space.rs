use ndarray::{linalg::kron, Array1, Array2};
use ndarray_linalg::{EigValsh, UPLO};
use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

/// Qubit basis state. The excited state sits on the north pole.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QubitLevel {
    Ground = 0,
    Excited = 1,
}

/// Truncated qubit ⊗ resonator space.
///
/// Basis index of `|m, q⟩` is `q * N + m` with `N` resonator levels, i.e. the
/// qubit is the slow (outer) tensor factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HilbertSpace {
    resonator_levels: usize,
}

impl HilbertSpace {
    pub const QUBIT_LEVELS: usize = 2;

    pub fn new(resonator_levels: usize) -> Result<Self> {
        if resonator_levels < 2 {
            return Err(Error::Truncation(resonator_levels));
        }
        Ok(Self { resonator_levels })
    }

    pub fn resonator_levels(&self) -> usize {
        self.resonator_levels
    }

    pub fn dim(&self) -> usize {
        Self::QUBIT_LEVELS * self.resonator_levels
    }

    pub fn index(&self, photons: usize, qubit: QubitLevel) -> usize {
        debug_assert!(photons < self.resonator_levels);
        qubit as usize * self.resonator_levels + photons
    }

    /// Lifts a 2×2 qubit matrix to the composite space.
    pub fn lift_qubit(&self, op: &Array2<C64>) -> Array2<C64> {
        kron(op, &Array2::eye(self.resonator_levels))
    }

    /// Lifts an `N`×`N` resonator matrix to the composite space.
    pub fn lift_resonator(&self, op: &Array2<C64>) -> Array2<C64> {
        kron(&Array2::eye(Self::QUBIT_LEVELS), op)
    }

    pub(crate) fn check(&self, m: &Array2<C64>) -> Result<()> {
        let d = self.dim();
        if m.nrows() != d || m.ncols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: if m.nrows() != d { m.nrows() } else { m.ncols() },
            });
        }
        Ok(())
    }
}

/// What the entries of an [`Operator`] measure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorUnit {
    Dimensionless,
    /// rad/s
    AngularFrequency,
}

/// Relative Hermiticity tolerance for Hamiltonians.
pub const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct Operator {
    space: HilbertSpace,
    matrix: Array2<C64>,
    unit: OperatorUnit,
}

impl Operator {
    pub fn new(space: HilbertSpace, matrix: Array2<C64>, unit: OperatorUnit) -> Result<Self> {
        space.check(&matrix)?;
        Ok(Self {
            space,
            matrix,
            unit,
        })
    }

    /// A Hamiltonian in rad/s; rejects matrices that are not Hermitian.
    pub fn hamiltonian(space: HilbertSpace, matrix: Array2<C64>) -> Result<Self> {
        let op = Self::new(space, matrix, OperatorUnit::AngularFrequency)?;
        let defect = op.hermiticity_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::NotHermitian(defect));
        }
        Ok(op)
    }

    pub fn dimensionless(space: HilbertSpace, matrix: Array2<C64>) -> Result<Self> {
        Self::new(space, matrix, OperatorUnit::Dimensionless)
    }

    pub fn space(&self) -> HilbertSpace {
        self.space
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Array2<C64> {
        self.matrix
    }

    pub fn unit(&self) -> OperatorUnit {
        self.unit
    }

    pub fn dagger(&self) -> Operator {
        Operator {
            space: self.space,
            matrix: dagger(&self.matrix),
            unit: self.unit,
        }
    }

    /// `‖A − A†‖_F / ‖A‖_F`, zero for the zero matrix.
    pub fn hermiticity_defect(&self) -> f64 {
        hermiticity_defect(&self.matrix)
    }
}

pub fn dagger(m: &Array2<C64>) -> Array2<C64> {
    m.t().mapv(|z| z.conj())
}

pub fn frobenius(m: &Array2<C64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn hermiticity_defect(m: &Array2<C64>) -> f64 {
    let norm = frobenius(m);
    if norm == 0.0 {
        return 0.0;
    }
    frobenius(&(m - &dagger(m))) / norm
}

pub fn trace(m: &Array2<C64>) -> C64 {
    m.diag().sum()
}

/// Tolerances applied when validating a [`DensityMatrix`].
pub const STATE_HERMITIAN_TOL: f64 = 1e-10;
pub const STATE_TRACE_TOL: f64 = 1e-10;
pub const STATE_POSITIVITY_TOL: f64 = 1e-8;

/// Hermitian, unit-trace, positive semidefinite matrix on a [`HilbertSpace`].
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    space: HilbertSpace,
    matrix: Array2<C64>,
}

impl DensityMatrix {
    pub fn new(space: HilbertSpace, matrix: Array2<C64>) -> Result<Self> {
        space.check(&matrix)?;
        let herm = frobenius(&(&matrix - &dagger(&matrix)));
        if herm > STATE_HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("Hermiticity defect {herm:e}")));
        }
        let tr = trace(&matrix);
        if (tr - C64::new(1.0, 0.0)).norm() > STATE_TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr}")));
        }
        let min_eig = min_eigenvalue(&matrix)?;
        if min_eig < -STATE_POSITIVITY_TOL {
            return Err(Error::InvalidState(format!("eigenvalue {min_eig:e}")));
        }
        Ok(Self { space, matrix })
    }

    /// Hermitizes and renormalizes before validating. Used on solver output.
    pub fn from_numerical(space: HilbertSpace, matrix: Array2<C64>) -> Result<Self> {
        let mut m = (&matrix + &dagger(&matrix)).mapv(|z| z * 0.5);
        let tr = trace(&m).re;
        if !(tr.is_finite() && tr.abs() > 0.0) {
            return Err(Error::InvalidState(format!("trace {tr}")));
        }
        m.mapv_inplace(|z| z / tr);
        Self::new(space, m)
    }

    /// Pure state `|ψ⟩⟨ψ|`; `psi` is normalized here.
    pub fn pure(space: HilbertSpace, psi: &Array1<C64>) -> Result<Self> {
        if psi.len() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: psi.len(),
            });
        }
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let psi = psi.mapv(|z| z / norm);
        let d = space.dim();
        let m = Array2::from_shape_fn((d, d), |(i, j)| psi[i] * psi[j].conj());
        Self::new(space, m)
    }

    /// `|m, q⟩⟨m, q|`.
    pub fn basis(space: HilbertSpace, photons: usize, qubit: QubitLevel) -> Result<Self> {
        if photons >= space.resonator_levels() {
            return Err(Error::InvalidParameter(format!(
                "photon number {photons} outside truncation {}",
                space.resonator_levels()
            )));
        }
        let d = space.dim();
        let mut m = Array2::zeros((d, d));
        let i = space.index(photons, qubit);
        m[[i, i]] = C64::new(1.0, 0.0);
        Ok(Self { space, matrix: m })
    }

    /// `ρ_q ⊗ ρ_r` with the qubit as outer factor.
    pub fn product(
        space: HilbertSpace,
        qubit: &Array2<C64>,
        resonator: &Array2<C64>,
    ) -> Result<Self> {
        Self::new(space, kron(qubit, resonator))
    }

    pub fn maximally_mixed(space: HilbertSpace) -> Self {
        let d = space.dim();
        Self {
            space,
            matrix: Array2::eye(d).mapv(|z: C64| z / d as f64),
        }
    }

    pub fn space(&self) -> HilbertSpace {
        self.space
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Array2<C64> {
        self.matrix
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        min_eigenvalue(&self.matrix)
    }

    /// `½ Σ|λ_i|` of `ρ − σ`.
    pub fn trace_distance(&self, other: &DensityMatrix) -> Result<f64> {
        let diff = &self.matrix - &other.matrix;
        let diff = (&diff + &dagger(&diff)).mapv(|z| z * 0.5);
        let eig = diff.eigvalsh(UPLO::Lower)?;
        Ok(0.5 * eig.iter().map(|x| x.abs()).sum::<f64>())
    }
}

fn min_eigenvalue(m: &Array2<C64>) -> Result<f64> {
    let h = (m + &dagger(m)).mapv(|z| z * 0.5);
    let eig = h.eigvalsh(UPLO::Lower)?;
    Ok(eig.iter().cloned().fold(f64::INFINITY, f64::min))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_short_truncation() {
        assert!(matches!(HilbertSpace::new(1), Err(Error::Truncation(1))));
        assert_eq!(HilbertSpace::new(7).unwrap().dim(), 14);
    }

    #[test]
    fn density_matrix_validation() {
        let space = HilbertSpace::new(3).unwrap();
        let mut m = Array2::<C64>::zeros((6, 6));
        m[[0, 0]] = C64::new(0.5, 0.0);
        assert!(DensityMatrix::new(space, m.clone()).is_err());
        m[[1, 1]] = C64::new(0.5, 0.0);
        assert!(DensityMatrix::new(space, m.clone()).is_ok());
        m[[0, 1]] = C64::new(0.0, 0.1);
        assert!(DensityMatrix::new(space, m.clone()).is_err());
        m[[1, 0]] = C64::new(0.0, -0.1);
        assert!(DensityMatrix::new(space, m.clone()).is_ok());
        m[[0, 1]] = C64::new(0.0, 0.9);
        m[[1, 0]] = C64::new(0.0, -0.9);
        assert!(DensityMatrix::new(space, m).is_err());
    }

    #[test]
    fn trace_distance_of_orthogonal_states() {
        let space = HilbertSpace::new(2).unwrap();
        let a = DensityMatrix::basis(space, 0, QubitLevel::Ground).unwrap();
        let b = DensityMatrix::basis(space, 1, QubitLevel::Excited).unwrap();
        assert!((a.trace_distance(&b).unwrap() - 1.0).abs() < 1e-12);
        assert!(a.trace_distance(&a).unwrap() < 1e-12);
    }
}
