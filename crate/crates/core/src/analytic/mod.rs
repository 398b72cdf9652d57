//! Closed-form three-level predictions and transient classification.

mod damping;
mod three_level;

pub use damping::{
    characteristic_cubic, damping_report, fastest_stabilization, settle_time,
    three_level_settle_time, DampingClass, DampingReport, CRITICAL_TOL, SETTLE_HORIZON,
};
pub use three_level::{
    approx_fidelity, effective_rates, exact_steady_fidelity, first_order_thermal,
    steady_three_level, thermal_fidelity, three_level_dynamics, uniform_trajectory,
    SteadyFidelity, ThreeLevelParams, ThreeLevelState,
};
