//! Dense open-system machinery on qubit ⊗ truncated resonator.

mod evolve;
mod ladder;
mod lindblad;
mod observables;
mod space;
mod steady;

pub use evolve::{automatic_step, evolve, evolve_driven, evolve_with, EvolveOptions, TRACE_DRIFT_TOL};
pub use ladder::{annihilation, make_ladder, qubit, Ladder};
pub use lindblad::{
    build_lindblad_generator, lindblad_rhs, stack, unstack, CollapseChannel, Liouvillian,
    LindbladModel,
};
pub use observables::{
    axis_projection, bloch_vector, fidelity_and_expectations, partial_trace_qubit,
    photon_distribution, photon_number, target_population, QubitReport,
};
pub use space::{
    dagger, frobenius, hermiticity_defect, trace, DensityMatrix, HilbertSpace, Operator,
    OperatorUnit, QubitLevel, HERMITIAN_TOL, STATE_HERMITIAN_TOL, STATE_POSITIVITY_TOL,
    STATE_TRACE_TOL,
};
pub use steady::{steady_state, steady_state_with, SteadyStateOptions, RESIDUAL_TOL, UNIQUENESS_RATIO};
