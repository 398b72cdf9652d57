use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::three_level::{uniform_trajectory, ThreeLevelParams, ThreeLevelState};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DampingClass {
    UnderDamped,
    CriticallyDamped,
    OverDamped,
}

impl DampingClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::UnderDamped => "under_damped",
            Self::CriticallyDamped => "critically_damped",
            Self::OverDamped => "over_damped",
        }
    }
}

impl std::fmt::Display for DampingClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DampingReport {
    pub roots: [Complex64; 3],
    pub class: DampingClass,
    /// `−max Re λ`, rad/s.
    pub slowest_rate: f64,
}

/// Relative tolerance on `|κ − 4gε|` for critical damping.
pub const CRITICAL_TOL: f64 = 1e-9;

/// Coefficients `[c2, c1, c0]` of `λ³ + c2λ² + c1λ + c0`.
pub fn characteristic_cubic(g_eps: f64, kappa: f64) -> [f64; 3] {
    let g2 = g_eps * g_eps;
    [1.5 * kappa, 0.5 * kappa * kappa + 4.0 * g2, 2.0 * kappa * g2]
}

/// Roots of `(λ + κ/2)(λ² + κλ + 4g²ε²)` and the damping regime.
pub fn damping_report(g_eps: f64, kappa: f64) -> Result<DampingReport> {
    if !(g_eps > 0.0 && kappa > 0.0) {
        return Err(Error::InvalidParameter("g_eps and kappa must be positive".into()));
    }
    let class = if (kappa - 4.0 * g_eps).abs() <= CRITICAL_TOL * kappa {
        DampingClass::CriticallyDamped
    } else if kappa < 4.0 * g_eps {
        DampingClass::UnderDamped
    } else {
        DampingClass::OverDamped
    };
    let half = Complex64::new(-0.5 * kappa, 0.0);
    let roots = match class {
        DampingClass::CriticallyDamped => [half; 3],
        _ => {
            let disc = Complex64::new(kappa * kappa - 16.0 * g_eps * g_eps, 0.0).sqrt();
            [half, half + 0.5 * disc, half - 0.5 * disc]
        }
    };
    let slowest_rate = -roots.iter().map(|r| r.re).fold(f64::NEG_INFINITY, f64::max);
    Ok(DampingReport { roots, class, slowest_rate })
}

/// Last time the signal enters the band `|v − steady| ≤ tol·|steady − v(0)|`,
/// linearly interpolated between samples.
pub fn settle_time(times: &[f64], values: &[f64], steady: f64, tolerance: f64) -> Result<f64> {
    let n = times.len().min(values.len());
    if n == 0 {
        return Err(Error::TimeGrid("empty trajectory".into()));
    }
    let band = tolerance * (steady - values[0]).abs();
    let outside = |k: usize| (values[k] - steady).abs() > band;
    if outside(n - 1) {
        return Err(Error::NoSettle { horizon: times[n - 1] });
    }
    match (0..n).rev().find(|&k| outside(k)) {
        None => Ok(times[0]),
        Some(k) => {
            let (d0, d1) = ((values[k] - steady).abs(), (values[k + 1] - steady).abs());
            let frac = if d0 > d1 { (d0 - band) / (d0 - d1) } else { 1.0 };
            Ok(times[k] + frac.clamp(0.0, 1.0) * (times[k + 1] - times[k]))
        }
    }
}

/// Samples per unit `1/κ` used by the settle-time scan.
const SAMPLES_PER_DECAY: f64 = 400.0;
/// Horizon in units of `2/κ`.
pub const SETTLE_HORIZON: f64 = 10.0;

/// Settle time of `⟨σ_n̂⟩` from `|0,−n̂⟩` under the full four-component model.
pub fn three_level_settle_time(p: &ThreeLevelParams, tolerance: f64) -> Result<f64> {
    p.validate()?;
    let horizon = SETTLE_HORIZON * 2.0 / p.kappa;
    let steps = (SAMPLES_PER_DECAY * SETTLE_HORIZON * 2.0) as usize;
    let dt = horizon / steps as f64;
    let traj = uniform_trajectory(p, &ThreeLevelState::start(), dt, steps, true);
    let steady = super::three_level::steady_three_level(p)?.sigma_n();
    let times: Vec<f64> = (0..=steps).map(|k| k as f64 * dt).collect();
    let values: Vec<f64> = traj.iter().map(|s| s.sigma_n()).collect();
    settle_time(&times, &values, steady, tolerance)
}

/// Minimizes the settle time over `gε ∈ [κ/8, κ]`; returns `(gε, time)`.
pub fn fastest_stabilization(
    kappa: f64,
    tolerance: f64,
    p_template: &ThreeLevelParams,
) -> Result<(f64, f64)> {
    if !(kappa > 0.0) {
        return Err(Error::InvalidParameter("kappa must be positive".into()));
    }
    if !(tolerance > 0.0 && tolerance < 0.5) {
        return Err(Error::InvalidParameter(format!("tolerance {tolerance} outside (0, 0.5)")));
    }
    let eval = |g_eps: f64| -> Option<f64> {
        let p = ThreeLevelParams { g_eps, kappa, ..*p_template };
        three_level_settle_time(&p, tolerance).ok()
    };
    let scan = |lo: f64, hi: f64, n: usize| -> Option<(f64, f64)> {
        (0..=n)
            .map(|k| lo + (hi - lo) * k as f64 / n as f64)
            .filter_map(|g| eval(g).map(|t| (g, t)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
    };
    let (lo, hi) = (kappa / 8.0, kappa);
    let coarse = 280;
    let (g0, _) = scan(lo, hi, coarse).ok_or(Error::NoSettle {
        horizon: SETTLE_HORIZON * 2.0 / kappa,
    })?;
    let cell = (hi - lo) / coarse as f64;
    let best = scan((g0 - cell).max(lo), (g0 + cell).min(hi), 100).expect("coarse optimum settles");
    Ok(best)
}
