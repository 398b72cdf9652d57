use ndarray::{linalg::kron, Array1, Array2, ShapeBuilder};

use super::space::{dagger, HilbertSpace, Operator, OperatorUnit};
use crate::{Error, Result, C64};

#[derive(Clone, Debug)]
pub struct CollapseChannel {
    pub operator: Operator,
    /// rad/s
    pub rate: f64,
}

impl CollapseChannel {
    pub fn new(operator: Operator, rate: f64) -> Result<Self> {
        if !(rate.is_finite() && rate >= 0.0) {
            return Err(Error::InvalidRate(rate));
        }
        Ok(Self { operator, rate })
    }
}

/// `dρ/dt = −i[H, ρ] + Σ r (LρL† − ½{L†L, ρ})`.
#[derive(Clone, Debug)]
pub struct LindbladModel {
    hamiltonian: Operator,
    channels: Vec<CollapseChannel>,
}

impl LindbladModel {
    pub fn new(hamiltonian: Operator, channels: Vec<CollapseChannel>) -> Result<Self> {
        if hamiltonian.unit() != OperatorUnit::AngularFrequency {
            return Err(Error::InvalidParameter(
                "Hamiltonian must carry angular-frequency units".into(),
            ));
        }
        let defect = hamiltonian.hermiticity_defect();
        if defect > super::space::HERMITIAN_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let space = hamiltonian.space();
        for ch in &channels {
            if ch.operator.space() != space {
                return Err(Error::DimensionMismatch {
                    expected: space.dim(),
                    found: ch.operator.space().dim(),
                });
            }
            if !(ch.rate.is_finite() && ch.rate >= 0.0) {
                return Err(Error::InvalidRate(ch.rate));
            }
        }
        Ok(Self {
            hamiltonian,
            channels,
        })
    }

    pub fn space(&self) -> HilbertSpace {
        self.hamiltonian.space()
    }

    pub fn hamiltonian(&self) -> &Operator {
        &self.hamiltonian
    }

    pub fn channels(&self) -> &[CollapseChannel] {
        &self.channels
    }

    /// Right-hand side of the master equation evaluated directly on `ρ`.
    pub fn rhs(&self, rho: &Array2<C64>) -> Array2<C64> {
        lindblad_rhs(self.hamiltonian.matrix(), &self.channels, rho)
    }
}

/// Direct evaluation of the master-equation right-hand side.
pub fn lindblad_rhs(h: &Array2<C64>, channels: &[CollapseChannel], rho: &Array2<C64>) -> Array2<C64> {
    let i = C64::new(0.0, 1.0);
    let mut out = (h.dot(rho) - rho.dot(h)).mapv(|z| -i * z);
    for ch in channels {
        if ch.rate == 0.0 {
            continue;
        }
        let l = ch.operator.matrix();
        let ld = dagger(l);
        let ldl = ld.dot(l);
        let d = l.dot(rho).dot(&ld) - (ldl.dot(rho) + rho.dot(&ldl)).mapv(|z| z * 0.5);
        out.scaled_add(C64::new(ch.rate, 0.0), &d);
    }
    out
}

/// Generator acting on column-stacked density matrices.
#[derive(Clone, Debug)]
pub struct Liouvillian {
    space: HilbertSpace,
    matrix: Array2<C64>,
}

impl Liouvillian {
    pub fn space(&self) -> HilbertSpace {
        self.space
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.matrix
    }

    pub fn apply(&self, rho: &Array2<C64>) -> Array2<C64> {
        unstack(&self.matrix.dot(&stack(rho)), self.space.dim())
    }
}

/// Column-major vectorization: `vec(ρ)[j·d + i] = ρ[i, j]`.
pub fn stack(rho: &Array2<C64>) -> Array1<C64> {
    rho.t().iter().cloned().collect()
}

pub fn unstack(v: &Array1<C64>, d: usize) -> Array2<C64> {
    Array2::from_shape_vec((d, d).f(), v.to_vec()).expect("vector length is d²")
}

/// Uses `vec(AρB) = (Bᵀ ⊗ A) vec(ρ)`.
pub fn build_lindblad_generator(model: &LindbladModel) -> Liouvillian {
    let space = model.space();
    let d = space.dim();
    let id: Array2<C64> = Array2::eye(d);
    let h = model.hamiltonian.matrix();
    let i = C64::new(0.0, 1.0);
    let mut l = (kron(&id, h) - kron(&h.t().to_owned(), &id)).mapv(|z| -i * z);
    for ch in &model.channels {
        if ch.rate == 0.0 {
            continue;
        }
        let op = ch.operator.matrix();
        let ldl = dagger(op).dot(op);
        let term = kron(&op.mapv(|z| z.conj()), op)
            - kron(&id, &ldl).mapv(|z| z * 0.5)
            - kron(&ldl.t().to_owned(), &id).mapv(|z| z * 0.5);
        l.scaled_add(C64::new(ch.rate, 0.0), &term);
    }
    Liouvillian { space, matrix: l }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::ladder::make_ladder;
    use crate::quantum::space::{DensityMatrix, QubitLevel};

    #[test]
    fn single_photon_decay() {
        let space = HilbertSpace::new(3).unwrap();
        let ladder = make_ladder(space).unwrap();
        let h = Operator::hamiltonian(space, Array2::zeros((6, 6))).unwrap();
        let kappa = 2.5;
        let model =
            LindbladModel::new(h, vec![CollapseChannel::new(ladder.a.clone(), kappa).unwrap()])
                .unwrap();
        let l = build_lindblad_generator(&model);
        let rho = DensityMatrix::basis(space, 1, QubitLevel::Ground).unwrap();
        let out = l.apply(rho.matrix());
        let mut expected = Array2::<C64>::zeros((6, 6));
        expected[[0, 0]] = C64::new(kappa, 0.0);
        expected[[1, 1]] = C64::new(-kappa, 0.0);
        let err: f64 = (&out - &expected).iter().map(|z| z.norm()).sum();
        assert!(err < 1e-12);
    }

    #[test]
    fn rejects_negative_rate() {
        let space = HilbertSpace::new(2).unwrap();
        let ladder = make_ladder(space).unwrap();
        assert!(matches!(
            CollapseChannel::new(ladder.a, -1.0),
            Err(Error::InvalidRate(_))
        ));
    }

    #[test]
    fn rejects_mixed_spaces() {
        let s2 = HilbertSpace::new(2).unwrap();
        let s3 = HilbertSpace::new(3).unwrap();
        let h = Operator::hamiltonian(s2, Array2::zeros((4, 4))).unwrap();
        let a3 = make_ladder(s3).unwrap().a;
        let ch = CollapseChannel::new(a3, 1.0).unwrap();
        assert!(matches!(
            LindbladModel::new(h, vec![ch]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn stacking_round_trip() {
        let m = Array2::from_shape_fn((3, 3), |(i, j)| C64::new(i as f64, j as f64));
        let v = stack(&m);
        assert_eq!(v[1], m[[1, 0]]);
        assert_eq!(v[3], m[[0, 1]]);
        assert_eq!(unstack(&v, 3), m);
    }
}
