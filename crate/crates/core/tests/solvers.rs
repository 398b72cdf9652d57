use std::f64::consts::PI;

use qstab_core::model::{plan_drives, stabilization_model, StabilizationTarget, SystemParams};
use qstab_core::quantum::{
    build_lindblad_generator, evolve, fidelity_and_expectations, steady_state, DensityMatrix,
    HilbertSpace, LindbladModel, QubitLevel,
};
use qstab_core::units::mhz;

const THETAS: [f64; 5] = [0.0, PI / 4.0, PI / 2.0, 3.0 * PI / 4.0, PI];

fn operating_point() -> (SystemParams, f64) {
    let g_eps = mhz(2.0);
    let params = SystemParams { kappa: 2.0 * g_eps, ..SystemParams::reference() };
    (params, g_eps)
}

fn model(theta: f64, phi: f64, levels: usize) -> LindbladModel {
    let (params, g_eps) = operating_point();
    let plan = plan_drives(&StabilizationTarget::pure(theta, phi).unwrap(), g_eps, &params).unwrap();
    stabilization_model(&params, &plan, HilbertSpace::new(levels).unwrap(), true).unwrap()
}

#[test]
fn evolution_stays_physical_and_reaches_steady_state() {
    for theta in [0.0, PI / 2.0] {
        let m = model(theta, 0.0, 10);
        let rho0 = DensityMatrix::basis(m.space(), 0, QubitLevel::Ground).unwrap();
        let times: Vec<f64> = (0..=40).map(|k| k as f64 * 50e-9).collect();
        let traj = evolve(&m, &rho0, &times).unwrap();
        for rho in &traj {
            assert!(rho.min_eigenvalue().unwrap() >= -1e-8);
        }
        let ss = steady_state(&build_lindblad_generator(&m)).unwrap();
        let dist = traj.last().unwrap().trace_distance(&ss).unwrap();
        assert!(dist <= 1e-4, "theta {theta}: trace distance {dist:e}");
    }
}

#[test]
fn doubling_truncation_leaves_fidelity_unchanged() {
    for theta in THETAS {
        let f = |n: usize| {
            let rho = steady_state(&build_lindblad_generator(&model(theta, 0.0, n))).unwrap();
            fidelity_and_expectations(&rho, theta, 0.0).fidelity
        };
        let (f10, f20) = (f(10), f(20));
        assert!((f10 - f20).abs() < 1e-4, "theta {theta}: {f10} vs {f20}");
    }
}

#[test]
fn steady_states_are_valid_density_matrices() {
    for theta in THETAS {
        let rho = steady_state(&build_lindblad_generator(&model(theta, 1.0, 10))).unwrap();
        assert!(rho.min_eigenvalue().unwrap() >= -1e-8);
        let r = fidelity_and_expectations(&rho, theta, 1.0);
        let n = [theta.sin() * 1f64.cos(), theta.sin() * 1f64.sin(), theta.cos()];
        let proj = n[0] * r.sx + n[1] * r.sy + n[2] * r.sz;
        assert!((r.fidelity.powi(2) - 0.5 * (1.0 + proj)).abs() <= 1e-12);
    }
}
