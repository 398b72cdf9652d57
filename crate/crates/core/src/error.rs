use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("resonator truncation must keep at least 2 Fock levels, got {0}")]
    Truncation(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("collapse rate must be finite and non-negative, got {0}")]
    InvalidRate(f64),

    #[error("operator is not Hermitian (relative defect {0:e})")]
    NotHermitian(f64),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error(
        "steady state is not unique: smallest singular values {smallest:e} and {second:e}"
    )]
    DegenerateSteadyState { smallest: f64, second: f64 },

    #[error("steady-state solve did not converge: residual {residual:e} exceeds {bound:e}")]
    SteadyStateResidual { residual: f64, bound: f64 },

    #[error("trace drift {drift:e} while integrating [{start:e}, {end:e}] s")]
    TraceDrift { start: f64, end: f64, drift: f64 },

    #[error("invalid time grid: {0}")]
    TimeGrid(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("longitudinal coupling unavailable")]
    LongitudinalUnavailable,

    #[error("drive plan violates frequency or phase matching: {0}")]
    PlanMismatch(String),

    #[error("outside validity regime: {0}")]
    OutsideValidity(String),

    #[error("three-level rates are singular: effective qubit transition rates sum to zero")]
    SingularRates,

    #[error("stabilization did not settle within the {horizon:e} s horizon")]
    NoSettle { horizon: f64 },

    #[error("SQUID bias too close to zero coupling (cos(phi/2) = {0:e})")]
    SquidBias(f64),

    #[error("fluxonium spectrum did not converge up to basis size {0}")]
    FluxoniumConvergence(usize),

    #[error("phi_b expansion invalid: oscillator length {0:.3} is not below 0.5")]
    PhaseExpansion(f64),

    #[error("near-resonant denominator {kind} for levels ({j}, {k}): {value:e} rad/s")]
    NearResonance {
        kind: &'static str,
        j: usize,
        k: usize,
        value: f64,
    },

    #[error("dressed state labeling is ambiguous for {label}: maximum overlap {overlap:.3}")]
    Labeling { label: String, overlap: f64 },

    #[error("lab-frame step {step:e} s is too coarse for the fastest frequency {omega:e} rad/s")]
    CoarseStep { step: f64, omega: f64 },

    #[error(transparent)]
    Linalg(#[from] ndarray_linalg::error::LinalgError),
}
