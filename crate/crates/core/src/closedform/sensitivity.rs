use super::{parity_signal, InputSpec};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Phase at which the `φ → 0` limit of the error-propagation formula is
/// evaluated.
pub const LIMIT_EVALUATION_PHASE: f64 = 1e-4;

/// Slopes below this magnitude are treated as zero.
const MIN_SLOPE: f64 = 1e-300;

/// Signals may overshoot `[-1, 1]` by this much through rounding.
const SIGNAL_OVERSHOOT: f64 = 1e-12;

/// Error-propagation phase uncertainty `√(1 - ⟨Π⟩²) / |∂⟨Π⟩/∂φ|`.
///
/// Parity squares to the identity, so `Δ⟨Π⟩² = 1 - ⟨Π⟩²`.
pub fn sensitivity_error_propagation<T: Scalar>(signal: T, dsignal_dphi: T) -> Result<T> {
    if !signal.is_finite() || !dsignal_dphi.is_finite() {
        return Err(Error::NonFinite {
            context: "sensitivity_error_propagation",
        });
    }
    if signal.abs() > T::one() + T::of(SIGNAL_OVERSHOOT) {
        return Err(Error::InvalidParameter {
            name: "signal",
            value: signal.to_f64_lossy(),
            reason: "parity expectation must lie in [-1, 1]",
        });
    }
    if dsignal_dphi.abs().to_f64_lossy() < MIN_SLOPE {
        return Err(Error::ZeroSlope {
            slope: dsignal_dphi.to_f64_lossy(),
        });
    }
    let a = signal.abs().min(T::one());
    let variance = (T::one() - a) * (T::one() + a);
    Ok(variance.sqrt() / dsignal_dphi.abs())
}

/// Central-difference step `max(1e-6, 1e-6 |φ|)`.
pub fn finite_difference_step<T: Scalar>(phi: T) -> T {
    let floor = T::of(1e-6);
    floor.max(floor * phi.abs())
}

/// `∂⟨Π⟩/∂φ` of the closed-form signal by central difference.
pub fn parity_slope<T: Scalar>(input: &InputSpec<T>, g: T, phi: T) -> Result<T> {
    central_difference(|x| parity_signal(input, g, x), phi, finite_difference_step(phi))
}

/// Error-propagation sensitivity at one phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sensitivity<T> {
    pub value: T,
    /// Set when the requested phase was the degenerate point `φ = 0` and the
    /// value is the limit evaluated at `phi_eval`.
    pub at_limit: bool,
    pub phi_eval: T,
}

/// Phase sensitivity of parity detection for `input` at phase `phi`.
///
/// At `φ = 0` both numerator and slope vanish; the returned value is then
/// taken at [`LIMIT_EVALUATION_PHASE`] and flagged.
pub fn phase_sensitivity<T: Scalar>(input: &InputSpec<T>, g: T, phi: T) -> Result<Sensitivity<T>> {
    phase_sensitivity_of(|x| parity_signal(input, g, x), phi)
}

/// [`phase_sensitivity`] for an arbitrary signal `φ ↦ ⟨Π⟩(φ)`.
pub fn phase_sensitivity_of<T, F>(signal: F, phi: T) -> Result<Sensitivity<T>>
where
    T: Scalar,
    F: Fn(T) -> Result<T>,
{
    let at_limit = phi == T::zero();
    let phi_eval = if at_limit { T::of(LIMIT_EVALUATION_PHASE) } else { phi };
    let slope = central_difference(&signal, phi_eval, finite_difference_step(phi_eval))?;
    let value = sensitivity_error_propagation(signal(phi_eval)?, slope)?;
    Ok(Sensitivity {
        value,
        at_limit,
        phi_eval,
    })
}

fn central_difference<T, F>(f: F, x: T, h: T) -> Result<T>
where
    T: Scalar,
    F: Fn(T) -> Result<T>,
{
    Ok((f(x + h)? - f(x - h)?) / (T::of(2.0) * h))
}
