use ndarray::{s, Array1, Array2};
use ndarray_linalg::{JobSvd, SolveTriangular, SVDDC, QR, Diag, UPLO};

use super::lindblad::{unstack, Liouvillian};
use super::space::{frobenius, DensityMatrix};
use crate::{Error, Result, C64};

/// Required gap between the two smallest singular values of the generator.
pub const UNIQUENESS_RATIO: f64 = 1e6;
/// Residual bound relative to `‖L‖_F`.
pub const RESIDUAL_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug)]
pub struct SteadyStateOptions {
    /// Singular-value test for a one-dimensional null space. Costs an SVD of
    /// the full generator.
    pub check_uniqueness: bool,
}

impl Default for SteadyStateOptions {
    fn default() -> Self {
        Self {
            check_uniqueness: true,
        }
    }
}

pub fn steady_state(l: &Liouvillian) -> Result<DensityMatrix> {
    steady_state_with(l, SteadyStateOptions::default())
}

/// Solves `[L; w·tr] x = [0; w]` in the least-squares sense by QR.
pub fn steady_state_with(l: &Liouvillian, opts: SteadyStateOptions) -> Result<DensityMatrix> {
    let space = l.space();
    let d = space.dim();
    let n = d * d;
    let lm = l.matrix();

    if opts.check_uniqueness {
        let (_, sv, _) = lm.svddc(JobSvd::None)?;
        let smallest = sv[n - 1];
        let second = sv[n - 2];
        if !(second > UNIQUENESS_RATIO * smallest) {
            return Err(Error::DegenerateSteadyState { smallest, second });
        }
    }

    let norm = frobenius(lm);
    let weight = if norm > 0.0 { norm / d as f64 } else { 1.0 };
    let mut bordered = Array2::<C64>::zeros((n + 1, n));
    bordered.slice_mut(s![..n, ..]).assign(lm);
    for i in 0..d {
        bordered[[n, i * d + i]] = C64::new(weight, 0.0);
    }
    let (q, r) = bordered.qr()?;
    // Right-hand side is w·e_{n}, so Q†b is the conjugated last row of Q.
    let qtb: Array1<C64> = q.row(n).mapv(|z| z.conj() * weight);
    let x = r.solve_triangular(UPLO::Upper, Diag::NonUnit, &qtb)?;

    let rho = DensityMatrix::from_numerical(space, unstack(&x, d))?;
    let stacked = super::lindblad::stack(rho.matrix());
    let residual = lm.dot(&stacked).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let bound = RESIDUAL_TOL * norm;
    if !(residual <= bound) {
        return Err(Error::SteadyStateResidual { residual, bound });
    }
    Ok(rho)
}
