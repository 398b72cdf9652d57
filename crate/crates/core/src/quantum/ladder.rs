use ndarray::{array, Array2};

use super::space::{HilbertSpace, Operator};
use crate::{Result, C64};

const ONE: C64 = C64::new(1.0, 0.0);
const ZERO: C64 = C64::new(0.0, 0.0);

/// 2×2 qubit matrices in the `(g, e)` basis.
pub mod qubit {
    use super::*;

    /// `|e⟩⟨g|`
    pub fn sigma_plus() -> Array2<C64> {
        array![[ZERO, ZERO], [ONE, ZERO]]
    }

    /// `|g⟩⟨e|`
    pub fn sigma_minus() -> Array2<C64> {
        array![[ZERO, ONE], [ZERO, ZERO]]
    }

    /// `|e⟩⟨e| − |g⟩⟨g|`
    pub fn sigma_z() -> Array2<C64> {
        array![[-ONE, ZERO], [ZERO, ONE]]
    }

    pub fn sigma_x() -> Array2<C64> {
        array![[ZERO, ONE], [ONE, ZERO]]
    }

    pub fn sigma_y() -> Array2<C64> {
        let i = C64::new(0.0, 1.0);
        array![[ZERO, i], [-i, ZERO]]
    }

    /// `|n̂⟩ = sin(θ/2)|g⟩ + e^{−iφ}cos(θ/2)|e⟩`, Bloch vector
    /// `(sinθ cosφ, sinθ sinφ, cosθ)`.
    pub fn bloch_ket(theta: f64, phi: f64) -> [C64; 2] {
        [
            C64::new((theta / 2.0).sin(), 0.0),
            C64::from_polar((theta / 2.0).cos(), -phi),
        ]
    }
}

/// Annihilation operator on `N` Fock levels.
pub fn annihilation(levels: usize) -> Array2<C64> {
    let mut a = Array2::zeros((levels, levels));
    for m in 1..levels {
        a[[m - 1, m]] = C64::new((m as f64).sqrt(), 0.0);
    }
    a
}

/// Standard operator set on qubit ⊗ resonator.
#[derive(Clone, Debug)]
pub struct Ladder {
    pub a: Operator,
    pub a_dagger: Operator,
    pub sigma_minus: Operator,
    pub sigma_plus: Operator,
    pub sigma_z: Operator,
}

impl Ladder {
    /// `a†a`
    pub fn number(&self) -> Array2<C64> {
        self.a_dagger.matrix().dot(self.a.matrix())
    }
}

pub fn make_ladder(space: HilbertSpace) -> Result<Ladder> {
    let space = HilbertSpace::new(space.resonator_levels())?;
    let a = space.lift_resonator(&annihilation(space.resonator_levels()));
    let a = Operator::dimensionless(space, a)?;
    let lift = |m: Array2<C64>| Operator::dimensionless(space, space.lift_qubit(&m));
    Ok(Ladder {
        a_dagger: a.dagger(),
        a,
        sigma_minus: lift(qubit::sigma_minus())?,
        sigma_plus: lift(qubit::sigma_plus())?,
        sigma_z: lift(qubit::sigma_z())?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::space::QubitLevel;

    fn max_abs(m: &Array2<C64>) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn two_level_resonator_entries() {
        let space = HilbertSpace::new(2).unwrap();
        let l = make_ladder(space).unwrap();
        let a = l.a.matrix();
        for i in 0..4 {
            for j in 0..4 {
                let expected = if (i, j) == (0, 1) || (i, j) == (2, 3) { 1.0 } else { 0.0 };
                assert_eq!(a[[i, j]], C64::new(expected, 0.0), "({i}, {j})");
            }
        }
    }

    #[test]
    fn pauli_identity() {
        let space = HilbertSpace::new(3).unwrap();
        let l = make_ladder(space).unwrap();
        let lhs = l.sigma_plus.matrix().dot(l.sigma_minus.matrix());
        let rhs = (l.sigma_z.matrix() + &Array2::<C64>::eye(6)).mapv(|z| z * 0.5);
        assert!(max_abs(&(lhs - rhs)) == 0.0);
    }

    #[test]
    fn number_operator_diagonal() {
        let space = HilbertSpace::new(10).unwrap();
        let n = make_ladder(space).unwrap().number();
        for m in 0..10 {
            for q in [QubitLevel::Ground, QubitLevel::Excited] {
                let i = space.index(m, q);
                assert!((n[[i, i]].re - m as f64).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn commutator_below_top_level() {
        let space = HilbertSpace::new(6).unwrap();
        let l = make_ladder(space).unwrap();
        let (a, ad) = (l.a.matrix(), l.a_dagger.matrix());
        let comm = a.dot(ad) - ad.dot(a);
        for q in [QubitLevel::Ground, QubitLevel::Excited] {
            for m in 0..5 {
                let i = space.index(m, q);
                assert!((comm[[i, i]] - ONE).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn bloch_ket_poles() {
        let north = qubit::bloch_ket(0.0, 0.3);
        assert!(north[0].norm() < 1e-15 && (north[1].norm() - 1.0).abs() < 1e-15);
        let south = qubit::bloch_ket(std::f64::consts::PI, 0.0);
        assert!((south[0].norm() - 1.0).abs() < 1e-15 && south[1].norm() < 1e-15);
    }
}
