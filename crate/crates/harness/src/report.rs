//! Text reports for `plan`, `damping` and `derive-circuit`.

use serde_json::{json, Value};
use std::f64::consts::TAU;
use std::fmt::Write;

use qstab_core::analytic::{damping_report, fastest_stabilization, three_level_settle_time};
use qstab_core::circuit::{derive, verify_dressed_vs_exact, CircuitParams, Truncation};
use qstab_core::model::synthesize_tones;
use qstab_core::units::wrap_phase;

use crate::config::{RunConfig, Source};
use crate::error::{Result, SolverContext};
use crate::run::Point;

fn mhz(w: f64) -> f64 {
    w / TAU / 1e6
}

fn ghz(w: f64) -> f64 {
    w / TAU / 1e9
}

/// Wrapped phase without a negative zero.
fn phase(x: f64) -> f64 {
    wrap_phase(x) + 0.0
}

/// Polar angle recovered from the effective sideband strengths of a plan.
pub fn recovered_theta(g_eps1: f64, g_eps2: f64, g_xi: f64) -> f64 {
    // g_eps2 − g_eps1 = g_eps (blue part), g_eps2 + g_eps1 = g_eps·cosθ, g_xi = g_eps·sinθ/2
    (2.0 * g_xi).atan2(g_eps1 + g_eps2)
}

/// Drive plan and the two-source synthesis of its three tones.
pub fn plan_text(c: &RunConfig) -> Result<String> {
    let p = Point::from_config(c);
    let plan = p.plan().at(|| "plan".into())?;
    let s = &p.system;
    let mut out = String::new();
    let t = &p.target;
    writeln!(out, "target: theta = {:.6} rad, phi = {:.6} rad, mix = {}", t.theta, t.phi, t.mix).unwrap();
    writeln!(out, "couplings: g/2pi = {:.4} MHz, g' = {:.5}", mhz(s.g), s.g_prime).unwrap();
    writeln!(out).unwrap();
    writeln!(out, "{:<6} {:>14} {:>14} {:>14} {:>12}", "drive", "depth", "strength/2pi", "freq/2pi", "phase").unwrap();
    writeln!(out, "{:<6} {:>14} {:>14} {:>14} {:>12}", "", "[1 or rad/s]", "[MHz]", "[GHz]", "[rad]").unwrap();
    let rows = [
        ("eps1", plan.eps1, s.g * plan.eps1, plan.omega1, plan.nu1),
        ("eps2", plan.eps2, s.g * plan.eps2, plan.omega2, plan.nu2),
        ("xi", plan.xi, s.g_prime * plan.xi, plan.omega3, plan.nu3),
    ];
    for (name, depth, strength, freq, nu) in rows {
        writeln!(out, "{name:<6} {depth:>14.6e} {:>14.6} {:>14.6} {:>12.6}", mhz(strength), ghz(freq), phase(nu)).unwrap();
    }
    let mismatch = wrap_phase(plan.nu1 + plan.nu2 - 2.0 * plan.nu3);
    let ok = plan.check(s).is_ok();
    writeln!(out).unwrap();
    writeln!(
        out,
        "phase matching: nu1 + nu2 - 2 nu3 = {mismatch:.3e} rad ({})",
        if ok { "satisfied" } else { "VIOLATED" }
    )
    .unwrap();
    writeln!(out, "azimuth (nu2 - nu1)/2 = {:.6} rad", plan.azimuth()).unwrap();
    let theta = recovered_theta(s.g * plan.eps1, s.g * plan.eps2, s.g_prime * plan.xi);
    writeln!(out, "recovered theta = {theta:.6} rad").unwrap();

    // Sources cos(ω_q t + υ₁) and cos(ω_r t + υ₂) with υ₂ = 0 and υ₁ = φ.
    let (u1, u2) = (phase(-plan.nu1), 0.0);
    writeln!(out).unwrap();
    writeln!(out, "two-source synthesis: upsilon1 = {u1:.6} rad, upsilon2 = {u2:.6} rad").unwrap();
    writeln!(out, "{:<6} {:>14} {:>12} {:>14}", "tone", "freq/2pi", "phase", "amplitude").unwrap();
    writeln!(out, "{:<6} {:>14} {:>12} {:>14}", "", "[GHz]", "[rad]", "[1 or rad/s]").unwrap();
    let synth = synthesize_tones(u1, u2, s.omega_q, s.omega_r);
    for ((name, (freq, nu)), tone) in ["T1", "T2", "T3"].into_iter().zip(synth).zip(plan.tones()) {
        writeln!(out, "{name:<6} {:>14.6} {:>12.6} {:>14.6e}", ghz(freq), phase(nu), tone.amplitude).unwrap();
    }
    let synth_mismatch = wrap_phase(synth[0].1 + synth[1].1 - 2.0 * synth[2].1);
    writeln!(out, "synthesized nu1 + nu2 - 2 nu3 = {synth_mismatch:.3e} rad").unwrap();
    let physical: Vec<String> =
        plan.tones().iter().map(|t| format!("{:.6}", phase(t.phase))).collect();
    writeln!(out, "non-negative tone phases: {}", physical.join(", ")).unwrap();
    Ok(out)
}

/// Roots of the characteristic cubic, regime, settle time and the fastest
/// coupling at the configured `κ`.
pub fn damping_text(c: &RunConfig) -> Result<String> {
    let p = Point::from_config(c);
    let tl = p.three_level();
    let ctx = || "damping".to_string();
    let r = damping_report(tl.g_eps, tl.kappa).at(ctx)?;
    let mut out = String::new();
    writeln!(out, "g_eps/2pi = {:.4} MHz, kappa/2pi = {:.4} MHz, kappa/(4 g_eps) = {:.4}", mhz(tl.g_eps), mhz(tl.kappa), tl.kappa / (4.0 * tl.g_eps)).unwrap();
    for (k, root) in r.roots.iter().enumerate() {
        writeln!(out, "root {k}: {:+.6e} {:+.6e}i rad/s", root.re, root.im).unwrap();
    }
    writeln!(out, "class: {}", r.class).unwrap();
    writeln!(out, "slowest rate: {:.6e} 1/s", r.slowest_rate).unwrap();
    match three_level_settle_time(&tl, c.solver.settle_tol) {
        Ok(t) => writeln!(out, "settle time ({} band): {:.3} ns", c.solver.settle_tol, t * 1e9).unwrap(),
        Err(e) => writeln!(out, "settle time: {e}").unwrap(),
    }
    let (g, t) = fastest_stabilization(tl.kappa, c.solver.settle_tol, &tl).at(ctx)?;
    writeln!(out, "fastest: g_eps/kappa = {:.4} (g_eps/2pi = {:.4} MHz), {:.3} ns", g / tl.kappa, mhz(g), t * 1e9).unwrap();
    Ok(out)
}

/// Dressed parameters of the config's circuit (or the reference circuit)
/// with the exact three-mode comparison.
pub fn derive_circuit(c: &RunConfig) -> Result<Value> {
    let params = match &c.source {
        Source::Circuit { params, .. } => *params,
        Source::Direct => CircuitParams::reference(),
    };
    let ctx = || "circuit derivation".to_string();
    let d = derive(&params).at(ctx)?;
    let cmp = verify_dressed_vs_exact(&d.modes, &d.dressed, Truncation::default()).at(ctx)?;
    Ok(json!({
        "circuit": serde_json::to_value(params).expect("serializable"),
        "circuit_units": "energies rad/s, phases rad, depths 1",
        "josephson": {
            "e_j1eff_dc": { "value": d.josephson.e_j1eff_dc, "unit": "rad/s" },
            "eps1": { "value": d.josephson.eps1, "unit": "1" },
            "eps2": { "value": d.josephson.eps2, "unit": "1" },
        },
        "fluxonium_levels": { "value": d.fluxonium.energies.to_vec(), "unit": "rad/s" },
        "fluxonium_basis": d.fluxonium.basis,
        "bare_modes": { "omega_a": d.modes.omega_a, "omega_b": d.modes.omega_b, "omega_ab": d.modes.omega_ab, "unit": "rad/s" },
        "dressed": d.dressed.to_json(),
        "exact_comparison": serde_json::to_value(cmp).expect("serializable"),
        "exact_comparison_units": "rad/s",
    }))
}
