//! Analytic results for an SU(1,1) interferometer fed by a phase-averaged
//! mode-a state and a Fock state `|n⟩` in mode b.
//!
//! Everything here is a pure function of scalar parameters. Factorial
//! ratios are evaluated in log space so that photon numbers in the tens do
//! not overflow.

mod coefficients;
mod fisher;
mod parity;
mod sensitivity;
mod weights;

pub use coefficients::{
    mcd_coefficients, squeeze_amplitude_cmnk, squeeze_coefficient_literal, squeeze_ket, squeeze_term, McdCoefficients,
};
pub use fisher::{benchmark_limits, qcrb, qfi_diagonal_mixture, qfi_pure_fock, total_mean_photon_number};
pub use parity::{
    fock_parity_kernel, parity_coherent_fock, parity_diagonal_mixture, parity_fock_fock, parity_fock_fock_jacobi,
    parity_fock_fock_literal, parity_signal, parity_small_phase_expansion, parity_thermal_fock,
    parity_two_mode_coherent, MIXTURE_NORM_TOLERANCE,
};
pub use sensitivity::{
    finite_difference_step, parity_slope, phase_sensitivity, phase_sensitivity_of, sensitivity_error_propagation,
    Sensitivity, LIMIT_EVALUATION_PHASE,
};
pub use weights::DiagonalWeights;

use crate::error::{check_finite, check_nonneg, Error, Result};
use crate::scalar::Scalar;

/// Which arm carries the estimated phase.
///
/// `Upper` is mode b (`e^{iφ b†b}`), `Lower` is mode a (`e^{iφ a†a}`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum PhaseMode {
    Upper,
    #[default]
    Lower,
}

/// OPA gain `g`, OPA phase `θ`, estimated phase `φ` and its placement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferometerConfig<T> {
    pub gain: T,
    pub opa_phase: T,
    pub phase: T,
    pub phase_mode: PhaseMode,
}

impl<T: Scalar> InterferometerConfig<T> {
    pub fn new(gain: T, opa_phase: T, phase: T, phase_mode: PhaseMode) -> Result<Self> {
        check_nonneg("gain", gain.to_f64_lossy())?;
        check_finite("opa_phase", opa_phase.to_f64_lossy())?;
        check_finite("phase", phase.to_f64_lossy())?;
        Ok(Self {
            gain,
            opa_phase,
            phase,
            phase_mode,
        })
    }

    /// Phase in mode a, the placement used by the closed forms.
    pub fn lower(gain: T, opa_phase: T, phase: T) -> Result<Self> {
        Self::new(gain, opa_phase, phase, PhaseMode::Lower)
    }

    pub fn with_phase(self, phase: T) -> Self {
        Self { phase, ..self }
    }

    pub fn mcd(&self) -> McdCoefficients<T> {
        mcd_coefficients(self.gain, self.opa_phase, self.phase)
    }
}

/// State injected into mode a.
#[derive(Debug, Clone, PartialEq)]
pub enum ModeAState<T> {
    Fock(usize),
    /// Coherent state `|α⟩` with `|α|² = mean` and `arg α = phase`.
    Coherent {
        mean: T,
        phase: T,
    },
    Thermal {
        mean: T,
    },
    /// Photon-number distribution `{p_m}` of a phase-averaged state.
    Diagonal(Vec<T>),
}

impl<T: Scalar> ModeAState<T> {
    /// Short lowercase tag used in tables: `fock`, `coherent`, `thermal`, `diag`.
    pub fn kind(&self) -> &'static str {
        match self {
            ModeAState::Fock(_) => "fock",
            ModeAState::Coherent { .. } => "coherent",
            ModeAState::Thermal { .. } => "thermal",
            ModeAState::Diagonal(_) => "diag",
        }
    }

    pub fn mean_photons(&self) -> T {
        match self {
            ModeAState::Fock(m) => T::of_usize(*m),
            ModeAState::Coherent { mean, .. } => *mean,
            ModeAState::Thermal { mean } => *mean,
            ModeAState::Diagonal(w) => w
                .iter()
                .enumerate()
                .fold(T::zero(), |acc, (m, &p)| acc + T::of_usize(m) * p),
        }
    }
}

/// Mode-a state paired with the mode-b Fock number `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct InputSpec<T> {
    pub mode_a: ModeAState<T>,
    pub n: usize,
}

/// Normalization tolerance for explicitly supplied diagonal weights.
pub const DIAGONAL_NORM_TOLERANCE: f64 = 1e-12;

impl<T: Scalar> InputSpec<T> {
    pub fn new(mode_a: ModeAState<T>, n: usize) -> Result<Self> {
        match &mode_a {
            ModeAState::Fock(_) => {}
            ModeAState::Coherent { mean, phase } => {
                check_nonneg("coherent mean", mean.to_f64_lossy())?;
                check_finite("coherent phase", phase.to_f64_lossy())?;
            }
            ModeAState::Thermal { mean } => check_nonneg("thermal mean", mean.to_f64_lossy())?,
            ModeAState::Diagonal(w) => {
                DiagonalWeights::new(w.clone(), T::of(DIAGONAL_NORM_TOLERANCE))?;
            }
        }
        Ok(Self { mode_a, n })
    }

    pub fn fock(m: usize, n: usize) -> Self {
        Self {
            mode_a: ModeAState::Fock(m),
            n,
        }
    }

    pub fn coherent(mean: T, n: usize) -> Result<Self> {
        Self::new(ModeAState::Coherent { mean, phase: T::zero() }, n)
    }

    pub fn thermal(mean: T, n: usize) -> Result<Self> {
        Self::new(ModeAState::Thermal { mean }, n)
    }

    pub fn diagonal(weights: Vec<T>, n: usize) -> Result<Self> {
        Self::new(ModeAState::Diagonal(weights), n)
    }

    /// `n̄_a`, the mean photon number of the mode-a state.
    pub fn mean_a(&self) -> T {
        self.mode_a.mean_photons()
    }

    /// Photon-number distribution of the mode-a state after phase averaging,
    /// truncated once the discarded tail falls below `tail_tol`.
    pub fn diagonal_weights(&self, tail_tol: T) -> Result<DiagonalWeights<T>> {
        match &self.mode_a {
            ModeAState::Fock(m) => Ok(DiagonalWeights::point(*m)),
            ModeAState::Coherent { mean, .. } => DiagonalWeights::poisson(*mean, tail_tol),
            ModeAState::Thermal { mean } => DiagonalWeights::geometric(*mean, tail_tol),
            ModeAState::Diagonal(w) => DiagonalWeights::new(w.clone(), T::of(DIAGONAL_NORM_TOLERANCE)),
        }
    }
}

pub(crate) fn require_gain<T: Scalar>(g: T) -> Result<()> {
    if !(g >= T::zero()) || !g.is_finite() {
        return Err(Error::InvalidParameter {
            name: "gain",
            value: g.to_f64_lossy(),
            reason: "must be finite and non-negative",
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_photons_per_variant() {
        assert_eq!(ModeAState::<f64>::Fock(3).mean_photons(), 3.0);
        assert_eq!(ModeAState::Coherent { mean: 1.5, phase: 0.2 }.mean_photons(), 1.5);
        assert_eq!(ModeAState::Thermal { mean: 2.0 }.mean_photons(), 2.0);
        let d = ModeAState::Diagonal(vec![0.25, 0.5, 0.25]);
        assert!((d.mean_photons() - 1.0f64).abs() < 1e-15);
    }

    #[test]
    fn rejects_negative_gain_and_bad_weights() {
        assert!(InterferometerConfig::lower(-0.1f64, 0.0, 0.0).is_err());
        assert!(InputSpec::diagonal(vec![0.5f64, 0.4], 1).is_err());
        assert!(InputSpec::diagonal(vec![1.2f64, -0.2], 1).is_err());
        assert!(InputSpec::thermal(-1.0f64, 0).is_err());
        assert!(InputSpec::diagonal(vec![0.5f64, 0.5], 1).is_ok());
    }
}
