//! Hamiltonians, dissipation channels and drive planning.

mod hamiltonian;
mod params;
mod plan;

pub use hamiltonian::{
    build_lab_frame_generator, build_rotating_hamiltonian, check_lab_step, stabilization_model,
    thermal_channels, LabCoefficients, LabFrameGenerator, LAB_STEP_PHASE, LAB_STEP_PHASE_MAX,
};
pub use params::{StabilizationTarget, SystemParams};
pub use plan::{
    plan_drives, sigma_n_ladder, synthesize_tones, DrivePlan, Tone, MIX_SEARCH_LEVELS, PHASE_TOL,
};
