//! Reduction of the raw circuit (resonator, SQUID coupler, fluxonium) to the
//! dressed parameters `ω_r, ω_q, χ, g, g′`, with an exact-diagonalization
//! cross-check.

mod dressed;
mod exact;
mod fluxonium;
mod modes;
mod params;

pub use dressed::{
    dressed_params, dressed_params_with, normal_modes, DressedParams, NormalModes,
    DEFAULT_QUBIT_LEVELS, RESONANCE_TOL,
};
pub use exact::{
    three_mode_hamiltonian, verify_dressed_vs_exact, ExactComparison, ResonatorQubit, Truncation,
    MIN_LABEL_OVERLAP,
};
pub use fluxonium::{
    displacement, fluxonium_spectrum, fluxonium_spectrum_with, FluxoniumOptions,
    FluxoniumSpectrum,
};
pub use modes::{bare_modes, BareModes, MAX_OSCILLATOR_LENGTH};
pub use params::{
    effective_josephson, CircuitParams, JosephsonDrive, MAX_DEPTH, MIN_SQUID_COS, WARN_DEPTH,
};

use crate::Result;

/// Fluxonium levels computed by [`derive`].
pub const DERIVE_LEVELS: usize = DEFAULT_QUBIT_LEVELS + 2;

/// Every intermediate product of the reduction.
#[derive(Clone, Debug)]
pub struct Derivation {
    pub josephson: JosephsonDrive,
    pub fluxonium: FluxoniumSpectrum,
    pub modes: BareModes,
    pub dressed: DressedParams,
}

/// Runs the full chain from raw circuit energies to dressed parameters.
pub fn derive(p: &CircuitParams) -> Result<Derivation> {
    let josephson = effective_josephson(p)?;
    let fluxonium = fluxonium_spectrum(p.e_c, p.e_j2, p.e_lq, p.phi_fl_dc, DERIVE_LEVELS)?;
    let modes = bare_modes(p, josephson.e_j1eff_dc, &fluxonium)?;
    let dressed = dressed_params(&modes, &fluxonium, p.d3)?;
    Ok(Derivation { josephson, fluxonium, modes, dressed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::ghz;

    #[test]
    fn reference_derivation() {
        let d = derive(&CircuitParams::reference()).unwrap();
        let r = &d.dressed;
        assert!(r.omega_r > ghz(4.0) && r.omega_r < ghz(8.0));
        assert!(r.omega_q > ghz(3.0) && r.omega_q < ghz(8.0));
        assert!(r.g > 0.0 && r.g_prime > 0.0 && r.xi > 0.0);
        let json = r.to_json();
        assert_eq!(json["chi"]["unit"], "rad/s");
        assert_eq!(json["g_prime"]["unit"], "1");
    }

    #[test]
    fn no_interaction_is_bare() {
        let d = derive(&CircuitParams::reference()).unwrap();
        let m = d.modes.scaled_couplings(0.0);
        let r = dressed_params(&m, &d.fluxonium, 0.01).unwrap();
        assert!((r.omega_r - m.omega_a).abs() <= 1e-14 * m.omega_a);
        assert_eq!(r.omega_q, m.energies[1] - m.energies[0]);
        assert_eq!((r.chi, r.g, r.g_prime), (0.0, 0.0, 0.0));
        let c = verify_dressed_vs_exact(&m, &r, Truncation::default()).unwrap();
        let eps = 1e-12 * m.omega_a;
        assert!(c.error.omega_r < eps && c.error.omega_q < eps && c.error.chi < eps, "{c:?}");
    }

    #[test]
    fn tenth_of_design_coupling() {
        let d = derive(&CircuitParams::reference()).unwrap();
        let m = d.modes.scaled_couplings(0.1);
        let r = dressed_params(&m, &d.fluxonium, 0.01).unwrap();
        let c = verify_dressed_vs_exact(&m, &r, Truncation::default()).unwrap();
        assert!(c.error.chi <= 0.05 * c.exact.chi.abs(), "{c:?}");
    }

    #[test]
    fn design_coupling_report() {
        let d = derive(&CircuitParams::reference()).unwrap();
        let c = verify_dressed_vs_exact(&d.modes, &d.dressed, Truncation::default()).unwrap();
        assert!(c.min_overlap >= MIN_LABEL_OVERLAP);
        assert!(c.exact.omega_r.is_finite() && c.exact.chi.is_finite());
    }
}
