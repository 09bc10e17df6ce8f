//! Brute-force reference simulator on a truncated two-mode Fock space.
//!
//! States are evolved gate by gate; no closed-form result is used. Every
//! operation books the probability it pushes past the cutoff, and the
//! cutoff policy grows the basis until that leak fits the budget.

mod ensemble;
mod observables;
mod ops;
mod runner;
mod state;

pub use ensemble::{
    build_input, interferometer_output, phase_average_diagonal, MixtureEnsemble, DEFAULT_TAIL_TOL,
    ENSEMBLE_WEIGHT_TOLERANCE, MEMBER_NORM_TOLERANCE,
};
pub use observables::{
    parity_expectation, parity_matrix_element, photon_statistics, state_parity, state_photon_statistics,
    PhotonStatistics,
};
pub use ops::{
    apply_phase_shift, apply_two_mode_squeezer, apply_two_mode_squeezer_with, evolve_through_interferometer, Direction,
    Propagator, SUBSTEP_STRENGTH,
};
pub use runner::{
    off_diagonal_parity, oracle_mean_photons, oracle_parity, oracle_parity_sweep, oracle_parity_two_mode_coherent,
    oracle_qfi_mixture, oracle_qfi_pure, run_with_policy, squeezed_fock, CutoffPolicy, OracleValue, PolicyRun,
    DEFAULT_ERROR_TOLERANCE,
};
pub use state::{Mode, TwoModeStateVector, DEFAULT_LEAK_BUDGET};
