use ndarray::Array2;
use ndarray_linalg::{EigValsh, UPLO};

use super::lindblad::{CollapseChannel, LindbladModel};
use super::space::{dagger, trace, DensityMatrix, HilbertSpace};
use crate::{Error, Result, C64};

/// Largest tolerated `|Tr ρ − 1|` before integration is abandoned.
pub const TRACE_DRIFT_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, Default)]
pub struct EvolveOptions {
    /// Overrides the automatic step bound when smaller.
    pub max_step: Option<f64>,
}

/// Dissipative part shared by all integrators: `−½ Σ r L†L` and `√r L`.
struct Dissipation {
    anti: Array2<C64>,
    jumps: Vec<(Array2<C64>, Array2<C64>)>,
}

impl Dissipation {
    fn new(d: usize, channels: &[CollapseChannel]) -> Self {
        let mut anti = Array2::<C64>::zeros((d, d));
        let mut jumps = Vec::new();
        for ch in channels.iter().filter(|c| c.rate > 0.0) {
            let l = ch.operator.matrix();
            anti.scaled_add(C64::new(-0.5 * ch.rate, 0.0), &dagger(l).dot(l));
            let j = l.mapv(|z| z * ch.rate.sqrt());
            jumps.push((dagger(&j), j));
        }
        Self { anti, jumps }
    }

    /// `Kρ + ρK† + Σ JρJ†` with `K = −iH − ½ΣrL†L`.
    fn rhs(&self, k: &Array2<C64>, rho: &Array2<C64>) -> Array2<C64> {
        let kr = k.dot(rho);
        let mut out = &kr + &dagger(&kr);
        for (jd, j) in &self.jumps {
            out += &j.dot(rho).dot(jd);
        }
        out
    }

    fn effective(&self, h: &Array2<C64>) -> Array2<C64> {
        let i = C64::new(0.0, 1.0);
        h.mapv(|z| -i * z) + &self.anti
    }
}

fn spectral_radius(h: &Array2<C64>) -> Result<f64> {
    let herm = (h + &dagger(h)).mapv(|z| z * 0.5);
    Ok(herm
        .eigvalsh(UPLO::Lower)?
        .iter()
        .fold(0.0_f64, |m, x| m.max(x.abs())))
}

/// `min(1/(20‖H‖), 1/(20·max r‖L†L‖))`, infinite for a frozen model.
pub fn automatic_step(model: &LindbladModel) -> Result<f64> {
    let mut bound = f64::INFINITY;
    let h = spectral_radius(model.hamiltonian().matrix())?;
    if h > 0.0 {
        bound = bound.min(1.0 / (20.0 * h));
    }
    for ch in model.channels() {
        if ch.rate > 0.0 {
            let l = ch.operator.matrix();
            let norm = spectral_radius(&dagger(l).dot(l))?;
            if norm > 0.0 {
                bound = bound.min(1.0 / (20.0 * ch.rate * norm));
            }
        }
    }
    Ok(bound)
}

fn check_times(times: &[f64]) -> Result<()> {
    match times.first() {
        None => return Err(Error::TimeGrid("empty time list".into())),
        Some(&t0) if t0 != 0.0 => {
            return Err(Error::TimeGrid(format!("first time must be 0, got {t0:e}")))
        }
        _ => {}
    }
    for w in times.windows(2) {
        if !(w[1] > w[0]) || !w[1].is_finite() {
            return Err(Error::TimeGrid(format!(
                "times must be strictly increasing ({:e} then {:e})",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}

fn rk4_step<F>(rho: &Array2<C64>, t: f64, h: f64, f: &F) -> Array2<C64>
where
    F: Fn(f64, &Array2<C64>) -> Array2<C64>,
{
    let half = C64::new(0.5 * h, 0.0);
    let k1 = f(t, rho);
    let k2 = f(t + 0.5 * h, &(rho + &k1.mapv(|z| z * half)));
    let k3 = f(t + 0.5 * h, &(rho + &k2.mapv(|z| z * half)));
    let k4 = f(t + h, &(rho + &k3.mapv(|z| z * h)));
    let sixth = h / 6.0;
    let mut out = rho.clone();
    out.scaled_add(C64::new(sixth, 0.0), &k1);
    out.scaled_add(C64::new(2.0 * sixth, 0.0), &k2);
    out.scaled_add(C64::new(2.0 * sixth, 0.0), &k3);
    out.scaled_add(C64::new(sixth, 0.0), &k4);
    out
}

fn integrate<F>(
    space: HilbertSpace,
    rho0: &DensityMatrix,
    times: &[f64],
    max_step: f64,
    f: F,
) -> Result<Vec<DensityMatrix>>
where
    F: Fn(f64, &Array2<C64>) -> Array2<C64>,
{
    check_times(times)?;
    if rho0.space() != space {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            found: rho0.space().dim(),
        });
    }
    let mut out = Vec::with_capacity(times.len());
    out.push(rho0.clone());
    let mut rho = rho0.matrix().clone();
    for w in times.windows(2) {
        let (start, end) = (w[0], w[1]);
        let span = end - start;
        let steps = (span / max_step).ceil().max(1.0) as usize;
        let h = span / steps as f64;
        for k in 0..steps {
            rho = rk4_step(&rho, start + k as f64 * h, h, &f);
        }
        let drift = (trace(&rho) - C64::new(1.0, 0.0)).norm();
        if !(drift <= TRACE_DRIFT_TOL) {
            return Err(Error::TraceDrift { start, end, drift });
        }
        out.push(DensityMatrix::from_numerical(space, rho.clone())?);
    }
    Ok(out)
}

/// Fixed-step RK4 with snapshots at `times` (which start at 0).
pub fn evolve(model: &LindbladModel, rho0: &DensityMatrix, times: &[f64]) -> Result<Vec<DensityMatrix>> {
    evolve_with(model, rho0, times, EvolveOptions::default())
}

pub fn evolve_with(
    model: &LindbladModel,
    rho0: &DensityMatrix,
    times: &[f64],
    opts: EvolveOptions,
) -> Result<Vec<DensityMatrix>> {
    let space = model.space();
    let mut step = automatic_step(model)?;
    if let Some(m) = opts.max_step {
        step = step.min(m);
    }
    let diss = Dissipation::new(space.dim(), model.channels());
    let k = diss.effective(model.hamiltonian().matrix());
    integrate(space, rho0, times, step, |_, rho| diss.rhs(&k, rho))
}

/// RK4 under a time-dependent Hamiltonian `hamiltonian(t)` (rad/s) with a
/// caller-chosen maximum step.
pub fn evolve_driven<H>(
    space: HilbertSpace,
    hamiltonian: H,
    channels: &[CollapseChannel],
    rho0: &DensityMatrix,
    times: &[f64],
    max_step: f64,
) -> Result<Vec<DensityMatrix>>
where
    H: Fn(f64) -> Array2<C64>,
{
    if !(max_step > 0.0 && max_step.is_finite()) {
        return Err(Error::TimeGrid(format!("invalid step {max_step:e}")));
    }
    for ch in channels {
        if ch.operator.space() != space {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: ch.operator.space().dim(),
            });
        }
    }
    let diss = Dissipation::new(space.dim(), channels);
    integrate(space, rho0, times, max_step, |t, rho| {
        diss.rhs(&diss.effective(&hamiltonian(t)), rho)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::ladder::make_ladder;
    use crate::quantum::lindblad::CollapseChannel;
    use crate::quantum::observables::photon_number;
    use crate::quantum::space::{Operator, QubitLevel};

    fn decay_model(space: HilbertSpace, kappa: f64) -> LindbladModel {
        let ladder = make_ladder(space).unwrap();
        let d = space.dim();
        let h = Operator::hamiltonian(space, Array2::zeros((d, d))).unwrap();
        LindbladModel::new(h, vec![CollapseChannel::new(ladder.a, kappa).unwrap()]).unwrap()
    }

    #[test]
    fn frozen_model_is_constant() {
        let space = HilbertSpace::new(3).unwrap();
        let model = decay_model(space, 0.0);
        let rho0 = DensityMatrix::basis(space, 2, QubitLevel::Excited).unwrap();
        let traj = evolve(&model, &rho0, &[0.0, 1.0, 5.0]).unwrap();
        for r in &traj {
            assert!(r.trace_distance(&rho0).unwrap() < 1e-15);
        }
    }

    #[test]
    fn exponential_photon_decay() {
        let space = HilbertSpace::new(4).unwrap();
        let kappa = 2.0 * std::f64::consts::PI * 4e6;
        let model = decay_model(space, kappa);
        let rho0 = DensityMatrix::basis(space, 1, QubitLevel::Ground).unwrap();
        let times: Vec<f64> = (0..=20).map(|k| k as f64 * 10e-9).collect();
        let traj = evolve(&model, &rho0, &times).unwrap();
        for (t, r) in times.iter().zip(&traj) {
            let n = photon_number(r);
            assert!((n - (-kappa * t).exp()).abs() < 1e-6, "t={t:e} n={n}");
        }
    }

    #[test]
    fn time_grid_validation() {
        let space = HilbertSpace::new(2).unwrap();
        let model = decay_model(space, 1.0);
        let rho0 = DensityMatrix::maximally_mixed(space);
        assert!(matches!(evolve(&model, &rho0, &[]), Err(Error::TimeGrid(_))));
        assert!(matches!(evolve(&model, &rho0, &[0.1, 0.2]), Err(Error::TimeGrid(_))));
        assert!(matches!(
            evolve(&model, &rho0, &[0.0, 0.2, 0.2]),
            Err(Error::TimeGrid(_))
        ));
    }

    #[test]
    fn driven_matches_static_for_constant_hamiltonian() {
        let space = HilbertSpace::new(3).unwrap();
        let ladder = make_ladder(space).unwrap();
        let g = 1.3;
        let h = (ladder.a_dagger.matrix().dot(ladder.sigma_plus.matrix())
            + ladder.a.matrix().dot(ladder.sigma_minus.matrix()))
        .mapv(|z| z * g);
        let channels = vec![CollapseChannel::new(ladder.a.clone(), 2.0).unwrap()];
        let model =
            LindbladModel::new(Operator::hamiltonian(space, h.clone()).unwrap(), channels.clone())
                .unwrap();
        let rho0 = DensityMatrix::basis(space, 0, QubitLevel::Ground).unwrap();
        let times = [0.0, 0.5, 1.0, 3.0];
        let step = automatic_step(&model).unwrap();
        let a = evolve(&model, &rho0, &times).unwrap();
        let b = evolve_driven(space, |_| h.clone(), &channels, &rho0, &times, step).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!(x.trace_distance(y).unwrap() < 1e-12);
        }
    }
}
