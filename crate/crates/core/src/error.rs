use thiserror::Error;

/// Errors produced by the closed forms and the Fock-space simulator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// The Fisher information vanishes, so the phase bound is infinite.
    #[error("no phase information: quantum Fisher information is zero")]
    NoPhaseInformation,

    #[error("zero slope: parity signal derivative {slope:e} is below resolution")]
    ZeroSlope { slope: f64 },

    #[error("non-finite result in {context}")]
    NonFinite { context: &'static str },

    #[error("weights are not normalized: sum = {sum} (tolerance {tolerance:e})")]
    UnnormalizedWeights { sum: f64, tolerance: f64 },

    #[error("negative weight {value} at index {index}")]
    NegativeWeight { index: usize, value: f64 },

    #[error("budget infeasible: N_tot = {n_tot} cannot host n = {n} at g = {gain}")]
    BudgetInfeasible { n_tot: f64, n: usize, gain: f64 },

    #[error("cutoff {cutoff} too small: {reason}")]
    CutoffTooSmall { cutoff: usize, reason: String },

    #[error("leaked norm {leaked:e} exceeds budget {budget:e} at cutoff {cutoff}")]
    LeakBudgetExceeded { leaked: f64, budget: f64, cutoff: usize },

    #[error("cutoff policy exhausted: reached maximum cutoff {max_cutoff}")]
    CutoffExhausted { max_cutoff: usize },

    #[error("invalid density table: {0}")]
    InvalidDensity(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_nonneg(name: &'static str, value: f64) -> Result<()> {
    if !(value >= 0.0) || !value.is_finite() {
        return Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite and non-negative",
        });
    }
    Ok(())
}

pub(crate) fn check_finite(name: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() {
        return Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be finite",
        });
    }
    Ok(())
}
