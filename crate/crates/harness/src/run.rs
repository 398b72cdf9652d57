//! Computations behind each subcommand.

use rayon::prelude::*;
use serde::Serialize;

use qstab_core::analytic::{
    damping_report, settle_time, three_level_dynamics, three_level_settle_time, thermal_fidelity,
    DampingClass, ThreeLevelParams, ThreeLevelState,
};
use qstab_core::model::{
    check_lab_step, plan_drives, stabilization_model, thermal_channels, DrivePlan, LabFrameGenerator,
    StabilizationTarget, SystemParams,
};
use qstab_core::quantum::{
    axis_projection, build_lindblad_generator, evolve_driven, evolve_with, fidelity_and_expectations,
    photon_number, qubit, steady_state, DensityMatrix, EvolveOptions, HilbertSpace,
};
use qstab_core::{Error, C64};

use crate::config::{Axis, Drive, Observable, RunConfig, SolverSettings, SweepSpec};
use crate::error::{HarnessError, Result, SolverContext};

/// One parameter point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub system: SystemParams,
    pub target: StabilizationTarget,
    pub drive: Drive,
}

impl Point {
    pub fn from_config(c: &RunConfig) -> Self {
        Self { system: c.system, target: c.target, drive: c.drive }
    }

    /// Sets a whitelisted parameter to an SI value.
    pub fn set(&mut self, name: &str, v: f64) -> Result<()> {
        let s = &mut self.system;
        match name {
            "g_eps" => self.drive = Drive::Axis { g_eps: v },
            "g_eps1" | "g_eps2" => {
                let (mut e1, mut e2) = match self.drive {
                    Drive::Sidebands { g_eps1, g_eps2 } => (g_eps1, g_eps2),
                    Drive::Axis { g_eps } => (0.0, g_eps),
                };
                if name == "g_eps1" {
                    e1 = v;
                } else {
                    e2 = v;
                }
                self.drive = Drive::Sidebands { g_eps1: e1, g_eps2: e2 };
            }
            "kappa" => s.kappa = v,
            "gamma" => s.gamma = v,
            "gamma_phi" => s.gamma_phi = v,
            "chi" => s.chi = v,
            "temperature" => s.temperature = v,
            "omega_r" => s.omega_r = v,
            "omega_q" => s.omega_q = v,
            "theta" => self.target.theta = v,
            "phi" => self.target.phi = v,
            _ => crate::config::parameter_dimension(name).map(|_| ())?,
        }
        Ok(())
    }

    /// Drive plan for this point. Explicit sidebands reuse the z-axis plan
    /// with the two depths replaced.
    pub fn plan(&self) -> qstab_core::Result<DrivePlan> {
        match self.drive {
            Drive::Axis { g_eps } => plan_drives(&self.target, g_eps, &self.system),
            Drive::Sidebands { g_eps1, g_eps2 } => {
                let axis = StabilizationTarget::pure(0.0, self.target.phi)?;
                let mut plan = plan_drives(&axis, 1.0, &self.system)?;
                plan.eps1 = g_eps1 / self.system.g;
                plan.eps2 = g_eps2 / self.system.g;
                plan.red_ratio = if g_eps2 > 0.0 { g_eps1 / g_eps2 } else { 0.0 };
                Ok(plan)
            }
        }
    }

    pub fn three_level(&self) -> ThreeLevelParams {
        let s = &self.system;
        ThreeLevelParams::for_axis(
            self.drive.effective(),
            s.kappa,
            self.target.theta,
            s.gamma,
            s.gamma_phi,
            s.omega_r,
            s.temperature,
        )
    }
}

/// Steady-state qubit observables.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SteadyPoint {
    pub fidelity: f64,
    pub sx: f64,
    pub sy: f64,
    pub sz: f64,
    pub photon_number: f64,
}

pub fn steady_point(p: &Point, levels: usize, include_stark: bool) -> qstab_core::Result<SteadyPoint> {
    let space = HilbertSpace::new(levels)?;
    let model = stabilization_model(&p.system, &p.plan()?, space, include_stark)?;
    let rho = steady_state(&build_lindblad_generator(&model))?;
    let r = fidelity_and_expectations(&rho, p.target.theta, p.target.phi);
    Ok(SteadyPoint {
        fidelity: r.fidelity,
        sx: r.sx,
        sy: r.sy,
        sz: r.sz,
        photon_number: photon_number(&rho),
    })
}

/// Row values for the requested observables.
#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Number(f64),
    Label(&'static str),
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Self::Number(v) => format!("{v:e}"),
            Self::Label(s) => (*s).to_string(),
        }
    }

    pub fn number(&self) -> Option<f64> {
        match self {
            Self::Number(v) => Some(*v),
            Self::Label(_) => None,
        }
    }
}

pub fn observe(p: &Point, observables: &[Observable], solver: &SolverSettings) -> qstab_core::Result<Vec<Cell>> {
    let steady = if observables.iter().any(|o| o.needs_steady_state()) {
        Some(steady_point(p, solver.fock_levels, solver.include_stark)?)
    } else {
        None
    };
    let tl = p.three_level();
    observables
        .iter()
        .map(|o| {
            Ok(match o {
                Observable::Fidelity => Cell::Number(steady.unwrap().fidelity),
                Observable::Sx => Cell::Number(steady.unwrap().sx),
                Observable::Sy => Cell::Number(steady.unwrap().sy),
                Observable::Sz => Cell::Number(steady.unwrap().sz),
                Observable::PhotonNumber => Cell::Number(steady.unwrap().photon_number),
                Observable::SettleTime => match three_level_settle_time(&tl, solver.settle_tol) {
                    Ok(t) => Cell::Number(t),
                    Err(Error::NoSettle { .. }) => Cell::Number(f64::NAN),
                    Err(e) => return Err(e),
                },
                Observable::DampingClass => {
                    Cell::Label(damping_report(tl.g_eps, tl.kappa)?.class.as_str())
                }
            })
        })
        .collect()
}

/// Fidelity change when the truncation is doubled.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceCheck {
    pub point: String,
    pub levels: usize,
    pub fidelity: f64,
    pub fidelity_doubled: f64,
    pub delta: f64,
    pub converged: bool,
}

pub fn convergence_check(p: &Point, solver: &SolverSettings, label: String) -> qstab_core::Result<ConvergenceCheck> {
    let n = solver.fock_levels;
    let a = steady_point(p, n, solver.include_stark)?.fidelity;
    let b = steady_point(p, 2 * n, solver.include_stark)?.fidelity;
    let delta = (a - b).abs();
    let converged = delta <= solver.convergence_tol;
    if !converged {
        log::warn!("{label}: fidelity changes by {delta:e} when the truncation is doubled from {n}");
    }
    Ok(ConvergenceCheck { point: label, levels: n, fidelity: a, fidelity_doubled: b, delta, converged })
}

/// Grid results in row-major order (axis1 outer).
#[derive(Clone, Debug)]
pub struct SweepResult {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub convergence: Vec<ConvergenceCheck>,
}

fn grid(sweep: &SweepSpec) -> Vec<(usize, Option<usize>)> {
    let n1 = sweep.axis1.values.len();
    match &sweep.axis2 {
        None => (0..n1).map(|i| (i, None)).collect(),
        Some(a2) => (0..n1).flat_map(|i| (0..a2.values.len()).map(move |j| (i, Some(j)))).collect(),
    }
}

fn point_at(base: &Point, sweep: &SweepSpec, i: usize, j: Option<usize>) -> Result<(Point, Vec<(String, f64)>)> {
    let mut p = *base;
    let mut coords = Vec::new();
    let mut apply = |axis: &Axis, k: usize| -> Result<()> {
        let v = axis.values[k];
        p.set(&axis.parameter, v)?;
        coords.push((axis.parameter.clone(), v));
        Ok(())
    };
    apply(&sweep.axis1, i)?;
    if let (Some(a2), Some(j)) = (&sweep.axis2, j) {
        apply(a2, j)?;
    }
    Ok((p, coords))
}

fn label(coords: &[(String, f64)]) -> String {
    coords.iter().map(|(n, v)| format!("{n}={v:e}")).collect::<Vec<_>>().join(", ")
}

/// Corners and center of the grid.
fn check_indices(sweep: &SweepSpec) -> Vec<(usize, Option<usize>)> {
    let n1 = sweep.axis1.values.len();
    let ends = |n: usize| {
        let mut v = vec![0, n / 2, n - 1];
        v.dedup();
        v
    };
    let mut out = Vec::new();
    match &sweep.axis2 {
        None => {
            for i in ends(n1) {
                out.push((i, None));
            }
        }
        Some(a2) => {
            let n2 = a2.values.len();
            for (i, j) in [(0, 0), (0, n2 - 1), (n1 - 1, 0), (n1 - 1, n2 - 1), (n1 / 2, n2 / 2)] {
                if !out.contains(&(i, Some(j))) {
                    out.push((i, Some(j)));
                }
            }
        }
    }
    out
}

/// Runs a grid sweep on `workers` threads. Rows come back in grid order.
pub fn run_sweep(c: &RunConfig, workers: usize) -> Result<SweepResult> {
    let sweep = c.sweep.as_ref().ok_or_else(|| HarnessError::Config("no sweep block in config".into()))?;
    let base = Point::from_config(c);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| HarnessError::Config(format!("thread pool: {e}")))?;
    let points = grid(sweep);
    let results: Vec<Result<Vec<Cell>>> = pool.install(|| {
        points
            .par_iter()
            .map(|&(i, j)| {
                let (p, coords) = point_at(&base, sweep, i, j)?;
                let mut row: Vec<Cell> = coords.iter().map(|(_, v)| Cell::Number(*v)).collect();
                row.extend(observe(&p, &sweep.observables, &c.solver).at(|| label(&coords))?);
                Ok(row)
            })
            .collect()
    });
    let rows = results.into_iter().collect::<Result<Vec<_>>>()?;

    let convergence = if c.solver.convergence_check && sweep.observables.iter().any(|o| o.needs_steady_state()) {
        let checks: Vec<Result<ConvergenceCheck>> = pool.install(|| {
            check_indices(sweep)
                .par_iter()
                .map(|&(i, j)| {
                    let (p, coords) = point_at(&base, sweep, i, j)?;
                    let l = label(&coords);
                    convergence_check(&p, &c.solver, l.clone()).at(|| l)
                })
                .collect()
        });
        checks.into_iter().collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };

    let mut header = vec![sweep.axis1.header()];
    if let Some(a2) = &sweep.axis2 {
        header.push(a2.header());
    }
    header.extend(sweep.observables.iter().map(|o| o.header()));
    Ok(SweepResult { header, rows, convergence })
}

/// Single steady-state point with all observables.
pub fn run_steady(c: &RunConfig) -> Result<SweepResult> {
    let p = Point::from_config(c);
    let obs = Observable::ALL;
    let row = observe(&p, &obs, &c.solver).at(|| "steady state".into())?;
    let convergence = if c.solver.convergence_check {
        vec![convergence_check(&p, &c.solver, "point".into()).at(|| "convergence check".into())?]
    } else {
        Vec::new()
    };
    Ok(SweepResult { header: obs.iter().map(|o| o.header()).collect(), rows: vec![row], convergence })
}

/// `|0⟩ ⊗ |−n̂⟩`, the state the stabilization starts from.
pub fn opposite_pole(space: HilbertSpace, theta: f64, phi: f64) -> qstab_core::Result<DensityMatrix> {
    let ket = qubit::bloch_ket(std::f64::consts::PI - theta, phi + std::f64::consts::PI);
    let mut psi = ndarray::Array1::<C64>::zeros(space.dim());
    psi[space.index(0, qstab_core::quantum::QubitLevel::Ground)] = ket[0];
    psi[space.index(0, qstab_core::quantum::QubitLevel::Excited)] = ket[1];
    DensityMatrix::pure(space, &psi)
}

#[derive(Clone, Debug, Serialize)]
pub struct TimeDomainResult {
    pub times: Vec<f64>,
    pub sigma_n: Vec<f64>,
    pub fidelity: Vec<f64>,
    pub photon_number: Vec<f64>,
    pub sigma_n_three_level: Vec<f64>,
    /// From the full trajectory against the full steady state; NaN if unsettled.
    pub settle_time: f64,
    pub settle_time_three_level: f64,
    pub damping_class: DampingClass,
}

impl TimeDomainResult {
    pub fn header() -> Vec<String> {
        ["t[s]", "sigma_n[1]", "fidelity[1]", "photon_number[1]", "sigma_n_three_level[1]"]
            .map(String::from)
            .to_vec()
    }

    pub fn rows(&self) -> Vec<Vec<Cell>> {
        (0..self.times.len())
            .map(|k| {
                [self.times[k], self.sigma_n[k], self.fidelity[k], self.photon_number[k], self.sigma_n_three_level[k]]
                    .map(Cell::Number)
                    .to_vec()
            })
            .collect()
    }
}

fn nan_if_unsettled(r: qstab_core::Result<f64>) -> qstab_core::Result<f64> {
    match r {
        Err(Error::NoSettle { .. }) => Ok(f64::NAN),
        other => other,
    }
}

/// Full Lindblad trajectory from `|0,−n̂⟩` alongside the three-level prediction.
pub fn run_time_domain(c: &RunConfig) -> Result<TimeDomainResult> {
    let p = Point::from_config(c);
    let ctx = || "time domain".to_string();
    let space = HilbertSpace::new(c.solver.fock_levels).at(ctx)?;
    let model = stabilization_model(&p.system, &p.plan().at(ctx)?, space, c.solver.include_stark).at(ctx)?;
    let td = c.time_domain;
    let times: Vec<f64> = (0..td.samples).map(|k| td.duration * k as f64 / (td.samples - 1) as f64).collect();
    let (theta, phi) = (p.target.theta, p.target.phi);
    let rho0 = opposite_pole(space, theta, phi).at(ctx)?;
    let traj = evolve_with(&model, &rho0, &times, EvolveOptions { max_step: c.solver.max_step }).at(ctx)?;
    let steady = steady_state(&build_lindblad_generator(&model)).at(ctx)?;

    let reports: Vec<_> = traj.iter().map(|r| fidelity_and_expectations(r, theta, phi)).collect();
    let sigma_n: Vec<f64> = reports.iter().map(|r| axis_projection(r, theta, phi)).collect();
    let fidelity = reports.iter().map(|r| r.fidelity).collect();
    let photons = traj.iter().map(photon_number).collect();
    let sn_steady = axis_projection(&fidelity_and_expectations(&steady, theta, phi), theta, phi);
    let settle = nan_if_unsettled(settle_time(&times, &sigma_n, sn_steady, c.solver.settle_tol)).at(ctx)?;

    let tl = p.three_level();
    let reduced = three_level_dynamics(&tl, &ThreeLevelState::start(), &times, true).at(ctx)?;
    let settle_tl = nan_if_unsettled(three_level_settle_time(&tl, c.solver.settle_tol)).at(ctx)?;
    Ok(TimeDomainResult {
        times,
        sigma_n,
        fidelity,
        photon_number: photons,
        sigma_n_three_level: reduced.iter().map(|s| s.sigma_n()).collect(),
        settle_time: settle,
        settle_time_three_level: settle_tl,
        damping_class: damping_report(tl.g_eps, tl.kappa).at(ctx)?.class,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ThermalResult {
    /// Zero-temperature fidelity and `⟨0,n̂|ρ|0,n̂⟩` from the full model.
    pub fidelity0: f64,
    pub rho22_0: f64,
    pub temperatures: Vec<f64>,
    pub fidelity: Vec<f64>,
    pub predicted: Vec<f64>,
    pub max_gap: f64,
}

impl ThermalResult {
    pub fn header() -> Vec<String> {
        ["temperature[K]", "fidelity[1]", "predicted[1]", "gap[1]"].map(String::from).to_vec()
    }

    pub fn rows(&self) -> Vec<Vec<Cell>> {
        (0..self.temperatures.len())
            .map(|k| {
                let gap = (self.fidelity[k] - self.predicted[k]).abs();
                [self.temperatures[k], self.fidelity[k], self.predicted[k], gap].map(Cell::Number).to_vec()
            })
            .collect()
    }
}

/// Population of `|0⟩ ⊗ |n̂⟩`.
fn vacuum_target_population(rho: &DensityMatrix, theta: f64, phi: f64) -> f64 {
    let space = rho.space();
    let ket = qubit::bloch_ket(theta, phi);
    let idx = [
        space.index(0, qstab_core::quantum::QubitLevel::Ground),
        space.index(0, qstab_core::quantum::QubitLevel::Excited),
    ];
    let m = rho.matrix();
    let mut acc = C64::new(0.0, 0.0);
    for a in 0..2 {
        for b in 0..2 {
            acc += ket[a].conj() * m[[idx[a], idx[b]]] * ket[b];
        }
    }
    acc.re
}

/// Full finite-temperature steady states against the perturbative
/// correction seeded by the zero-temperature full solution.
pub fn run_thermal(c: &RunConfig, workers: usize) -> Result<ThermalResult> {
    let p = Point::from_config(c);
    let (theta, phi) = (p.target.theta, p.target.phi);
    let solve = |t: f64| -> Result<(f64, f64)> {
        let mut q = p;
        q.system.temperature = t;
        let ctx = || format!("temperature={t:e}");
        let space = HilbertSpace::new(c.solver.fock_levels).at(ctx)?;
        let model = stabilization_model(&q.system, &q.plan().at(ctx)?, space, c.solver.include_stark).at(ctx)?;
        let rho = steady_state(&build_lindblad_generator(&model)).at(ctx)?;
        Ok((fidelity_and_expectations(&rho, theta, phi).fidelity, vacuum_target_population(&rho, theta, phi)))
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| HarnessError::Config(format!("thread pool: {e}")))?;
    let (f0, rho22_0) = solve(0.0)?;
    let fid: Vec<Result<f64>> = pool.install(|| c.temperatures.par_iter().map(|&t| solve(t).map(|r| r.0)).collect());
    let fidelity = fid.into_iter().collect::<Result<Vec<_>>>()?;
    let predicted = c
        .temperatures
        .iter()
        .map(|&t| thermal_fidelity(f0.clamp(0.0, 1.0), rho22_0.clamp(0.0, 1.0), p.system.omega_r, t).at(|| format!("temperature={t:e}")))
        .collect::<Result<Vec<_>>>()?;
    let max_gap = fidelity.iter().zip(&predicted).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    Ok(ThermalResult { fidelity0: f0, rho22_0, temperatures: c.temperatures.clone(), fidelity, predicted, max_gap })
}

#[derive(Clone, Debug, Serialize)]
pub struct RwaReport {
    pub times: Vec<f64>,
    pub sigma_n_lab: Vec<f64>,
    pub sigma_n_rotating: Vec<f64>,
    pub max_deviation: f64,
    /// Fidelities at the end of the window.
    pub fidelity_lab: f64,
    pub fidelity_rotating: f64,
    pub fidelity_gap: f64,
    pub lab_step: f64,
}

impl RwaReport {
    pub fn header() -> Vec<String> {
        ["t[s]", "sigma_n_lab[1]", "sigma_n_rotating[1]"].map(String::from).to_vec()
    }

    pub fn rows(&self) -> Vec<Vec<Cell>> {
        (0..self.times.len())
            .map(|k| [self.times[k], self.sigma_n_lab[k], self.sigma_n_rotating[k]].map(Cell::Number).to_vec())
            .collect()
    }
}

/// Lab-frame against rotating-frame evolution from `|0,−n̂⟩`.
pub fn validate_rwa(c: &RunConfig) -> Result<RwaReport> {
    let p = Point::from_config(c);
    let ctx = || "rwa validation".to_string();
    let space = HilbertSpace::new(c.rwa.fock_levels).at(ctx)?;
    let plan = p.plan().at(ctx)?;
    let lab = LabFrameGenerator::new(&p.system, &plan, space).at(ctx)?;
    let step = c.rwa.step_phase / lab.fastest_frequency();
    check_lab_step(&lab, step).at(ctx)?;

    let (theta, phi) = (p.target.theta, p.target.phi);
    let rho0 = opposite_pole(space, theta, phi).at(ctx)?;
    let n = c.rwa.samples;
    let times: Vec<f64> = (0..n).map(|k| c.rwa.duration * k as f64 / (n - 1) as f64).collect();

    let rotating = stabilization_model(&p.system, &plan, space, true).at(ctx)?;
    let rot = evolve_with(&rotating, &rho0, &times, EvolveOptions { max_step: c.solver.max_step }).at(ctx)?;
    let channels = thermal_channels(&p.system, space).at(ctx)?;
    let lab_traj = evolve_driven(space, |t| lab.matrix(t), &channels, &rho0, &times, step).at(ctx)?;

    let sn = |r: &DensityMatrix| axis_projection(&fidelity_and_expectations(r, theta, phi), theta, phi);
    let sigma_n_lab: Vec<f64> = lab_traj.iter().map(sn).collect();
    let sigma_n_rotating: Vec<f64> = rot.iter().map(sn).collect();
    let max_deviation = sigma_n_lab
        .iter()
        .zip(&sigma_n_rotating)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let fl = fidelity_and_expectations(lab_traj.last().unwrap(), theta, phi).fidelity;
    let fr = fidelity_and_expectations(rot.last().unwrap(), theta, phi).fidelity;
    Ok(RwaReport {
        times,
        sigma_n_lab,
        sigma_n_rotating,
        max_deviation,
        fidelity_lab: fl,
        fidelity_rotating: fr,
        fidelity_gap: (fl - fr).abs(),
        lab_step: step,
    })
}
