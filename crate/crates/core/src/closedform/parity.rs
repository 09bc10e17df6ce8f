use num_complex::Complex;

use super::{mcd_coefficients, require_gain, DiagonalWeights, InputSpec, ModeAState};
use crate::error::{check_nonneg, Error, Result};
use crate::scalar::{parity_sign, Scalar};
use crate::special::{jacobi, laguerre, ln_factorial};

/// Above this `min(m, n)` the alternating Fock×Fock sum loses too many
/// digits and the Jacobi form takes over.
const LITERAL_SUM_MAX_ORDER: usize = 6;

/// Normalization tolerance accepted by [`parity_diagonal_mixture`].
pub const MIXTURE_NORM_TOLERANCE: f64 = 1e-9;

/// Kernel `(sin²φ + 4 sin⁴(φ/2) cosh²(2g)) sinh²(2g)` of the Fock×Fock sum.
///
/// Equal to `s(2+s)` and to `|M|²(1+s)²`.
pub fn fock_parity_kernel<T: Scalar>(g: T, phi: T) -> T {
    let two = T::of(2.0);
    let sin_half = (phi / two).sin();
    let sin_half4 = sin_half.powi(4);
    (phi.sin().powi(2) + T::of(4.0) * sin_half4 * (two * g).cosh().powi(2)) * (two * g).sinh().powi(2)
}

/// Parity of mode b for the input `|m⟩|n⟩`, evaluated term by term:
///
/// `m! n! (-1)^n (1+s)^-(m+n+1) Σ_k (-K)^k / (k!² (m-k)! (n-k)!)`
///
/// with the literal kernel `K` from [`fock_parity_kernel`].
pub fn parity_fock_fock_literal<T: Scalar>(m: usize, n: usize, g: T, phi: T) -> Result<T> {
    require_gain(g)?;
    let mcd = mcd_coefficients(g, T::zero(), phi);
    let kernel = fock_parity_kernel(g, phi);
    if kernel == T::zero() {
        return Ok(parity_sign::<T>(n) * (T::one() + mcd.s).powi(-((m + n + 1) as i32)));
    }
    let ln_base = -T::of_usize(m + n + 1) * (T::one() + mcd.s).ln() + ln_factorial::<T>(m) + ln_factorial::<T>(n);
    let ln_kernel = kernel.ln();
    let mut sum = T::zero();
    for k in 0..=m.min(n) {
        let ln_term = ln_base + T::of_usize(k) * ln_kernel
            - T::of(2.0) * ln_factorial::<T>(k)
            - ln_factorial::<T>(m - k)
            - ln_factorial::<T>(n - k);
        sum += parity_sign::<T>(k) * ln_term.exp();
    }
    let value = parity_sign::<T>(n) * sum;
    if !value.is_finite() {
        return Err(Error::NonFinite {
            context: "parity_fock_fock",
        });
    }
    Ok(value)
}

/// Same signal through the Jacobi-polynomial form
///
/// `(-1)^(n+p) (1+s)^-(q-p+1) P_p^{(q-p, 0)}(1 - 2/(1+s)²)`,
/// `p = min(m, n)`, `q = max(m, n)`,
///
/// which avoids the cancellation of the alternating sum for large photon
/// numbers.
pub fn parity_fock_fock_jacobi<T: Scalar>(m: usize, n: usize, g: T, phi: T) -> Result<T> {
    require_gain(g)?;
    let s = mcd_coefficients(g, T::zero(), phi).s;
    let (p, q) = (m.min(n), m.max(n));
    let one_plus_s = T::one() + s;
    let x = T::one() - T::of(2.0) / (one_plus_s * one_plus_s);
    let poly = jacobi(p, T::of_usize(q - p), T::zero(), x);
    let scale = (-T::of_usize(q - p + 1) * one_plus_s.ln()).exp();
    let value = parity_sign::<T>(n + p) * scale * poly;
    if !value.is_finite() {
        return Err(Error::NonFinite {
            context: "parity_fock_fock",
        });
    }
    Ok(value)
}

/// Parity signal of mode b for the Fock input `|m⟩_a|n⟩_b`. Independent of `θ`.
pub fn parity_fock_fock<T: Scalar>(m: usize, n: usize, g: T, phi: T) -> Result<T> {
    if m.min(n) <= LITERAL_SUM_MAX_ORDER {
        parity_fock_fock_literal(m, n, g, phi)
    } else {
        parity_fock_fock_jacobi(m, n, g, phi)
    }
}

/// Coherent `|α⟩` in mode a, Fock `|n⟩` in mode b:
/// `(1-D)^n e^{-|α|²C} L_n(|α|²|M|²/(D-1)) / (1+s)`.
pub fn parity_coherent_fock<T: Scalar>(alpha_sq: T, n: usize, g: T, phi: T) -> Result<T> {
    require_gain(g)?;
    check_nonneg("alpha_sq", alpha_sq.to_f64_lossy())?;
    let c = mcd_coefficients(g, T::zero(), phi);
    // D - 1 = 1/(1+s) > 0 for every φ
    let x = alpha_sq * c.m.norm_sqr() / (c.d - T::one());
    let value = (T::one() - c.d).powi(n as i32) * (-alpha_sq * c.c).exp() * c.prefactor() * laguerre(n, x);
    if !value.is_finite() {
        return Err(Error::NonFinite {
            context: "parity_coherent_fock",
        });
    }
    Ok(value)
}

/// Thermal state of mean `n_th` in mode a, Fock `|n⟩` in mode b:
/// `(1 + n_th C - D)^n (1 + n_th C)^-(n+1) / (1+s)`.
pub fn parity_thermal_fock<T: Scalar>(n_th: T, n: usize, g: T, phi: T) -> Result<T> {
    require_gain(g)?;
    check_nonneg("n_th", n_th.to_f64_lossy())?;
    let c = mcd_coefficients(g, T::zero(), phi);
    let a = T::one() + n_th * c.c;
    Ok((a - c.d).powi(n as i32) * a.powi(-(n as i32) - 1) * c.prefactor())
}

/// `Σ_m p_m ⟨Π⟩_{m,n}` for an explicit photon-number distribution.
///
/// Truncating an infinite family is the caller's job.
pub fn parity_diagonal_mixture<T: Scalar>(weights: &[T], n: usize, g: T, phi: T) -> Result<T> {
    let weights = DiagonalWeights::new(weights.to_vec(), T::of(MIXTURE_NORM_TOLERANCE))?;
    let mut acc = T::zero();
    for (m, p) in weights.iter() {
        if p > T::zero() {
            acc += p * parity_fock_fock(m, n, g, phi)?;
        }
    }
    Ok(acc)
}

/// Two-mode coherent input `|α⟩|β⟩`:
/// `exp(2 Re(αβM) - |α|²C - |β|²D) / (1+s)`.
pub fn parity_two_mode_coherent<T: Scalar>(alpha: Complex<T>, beta: Complex<T>, g: T, theta: T, phi: T) -> Result<T> {
    require_gain(g)?;
    let c = mcd_coefficients(g, theta, phi);
    let exponent = T::of(2.0) * (alpha * beta * c.m).re - alpha.norm_sqr() * c.c - beta.norm_sqr() * c.d;
    Ok(exponent.exp() * c.prefactor())
}

/// Second-order expansion around the working point `φ = 0`:
/// `(-1)^n [1 - (2 n̄_a n + n̄_a + n + 1) sinh²(2g) φ² / 2]`.
///
/// Accurate while `|φ| sinh(2g) ≪ 1`; the remainder is `O(φ⁴)`.
pub fn parity_small_phase_expansion<T: Scalar>(mean_a: T, n: usize, g: T, phi: T) -> Result<T> {
    require_gain(g)?;
    check_nonneg("mean_a", mean_a.to_f64_lossy())?;
    let nf = T::of_usize(n);
    let curvature = (T::of(2.0) * mean_a * nf + mean_a + nf + T::one()) * (T::of(2.0) * g).sinh().powi(2);
    Ok(parity_sign::<T>(n) * (T::one() - curvature * phi * phi / T::of(2.0)))
}

/// Parity signal for any supported input, picking the matching closed form.
pub fn parity_signal<T: Scalar>(input: &InputSpec<T>, g: T, phi: T) -> Result<T> {
    let n = input.n;
    match &input.mode_a {
        ModeAState::Fock(m) => parity_fock_fock(*m, n, g, phi),
        ModeAState::Coherent { mean, .. } => parity_coherent_fock(*mean, n, g, phi),
        ModeAState::Thermal { mean } => parity_thermal_fock(*mean, n, g, phi),
        ModeAState::Diagonal(w) => parity_diagonal_mixture(w, n, g, phi),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn kernel_identity() {
        for &g in &[0.0, 0.2, 0.9, 1.5] {
            for i in 0..40 {
                let phi = -PI + i as f64 * 0.17;
                let c = mcd_coefficients(g, 0.3, phi);
                let k = fock_parity_kernel(g, phi);
                assert!((k - c.s * (2.0 + c.s)).abs() <= 1e-12 * k.max(1.0));
                let via_m = c.m.norm_sqr() * (1.0 + c.s).powi(2);
                assert!((k - via_m).abs() <= 1e-12 * k.max(1.0));
            }
        }
    }

    #[test]
    fn fock_parity_at_working_point() {
        for m in 0..6 {
            for n in 0..6 {
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                assert_eq!(parity_fock_fock(m, n, 0.8, 0.0f64).unwrap(), sign);
                assert_relative_eq!(parity_fock_fock(m, n, 0.0, 1.1f64).unwrap(), sign, epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn vacuum_parity() {
        let (g, phi) = (0.5f64, 0.3);
        let s = mcd_coefficients(g, 0.0, phi).s;
        assert_relative_eq!(
            parity_fock_fock(0, 0, g, phi).unwrap(),
            1.0 / (1.0 + s),
            epsilon = 1e-15
        );
        assert_relative_eq!(
            parity_coherent_fock(0.0, 0, g, phi).unwrap(),
            1.0 / (1.0 + s),
            epsilon = 1e-15
        );
        assert_relative_eq!(
            parity_two_mode_coherent(Complex::new(0.0, 0.0), Complex::new(0.0, 0.0), g, 0.4, phi).unwrap(),
            1.0 / (1.0 + s),
            epsilon = 1e-15
        );
    }

    #[test]
    fn literal_and_jacobi_forms_agree() {
        for m in 0..10 {
            for n in 0..10 {
                for &(g, phi) in &[(0.2, 0.4), (0.7, 1.3), (1.0, PI), (1.2, 2.2)] {
                    let a = parity_fock_fock_literal(m, n, g, phi).unwrap();
                    let b = parity_fock_fock_jacobi(m, n, g, phi).unwrap();
                    assert!((a - b).abs() < 1e-10, "m={m} n={n} g={g} phi={phi}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn large_photon_numbers_are_bounded() {
        for &(m, n) in &[(60, 60), (60, 3), (5, 60), (100, 40)] {
            for &phi in &[0.01, 0.5, 2.0] {
                let v: f64 = parity_fock_fock(m, n, 1.0, phi).unwrap();
                assert!(v.abs() <= 1.0 + 1e-12, "{m} {n} {phi}: {v}");
            }
        }
    }

    #[test]
    fn thermal_at_zero_temperature_is_vacuum_branch() {
        for n in 0..5 {
            for &phi in &[0.2, 1.0, 2.5] {
                let th = parity_thermal_fock(0.0, n, 0.6, phi).unwrap();
                let ff = parity_fock_fock(0, n, 0.6, phi).unwrap();
                assert_relative_eq!(th, ff, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn mixtures_reduce_to_point_mass() {
        let w = [1.0];
        for n in 0..3 {
            let a = parity_diagonal_mixture(&w, n, 0.6, 0.7f64).unwrap();
            let b = parity_fock_fock(0, n, 0.6, 0.7).unwrap();
            assert_eq!(a, b);
        }
        assert!(matches!(
            parity_diagonal_mixture(&[0.5, 0.4], 0, 0.6, 0.7f64),
            Err(Error::UnnormalizedWeights { .. })
        ));
    }

    #[test]
    fn coherent_and_thermal_match_mixture_sums() {
        let (g, phi) = (0.6f64, 0.4);
        let poisson = DiagonalWeights::poisson(1.5, 1e-14).unwrap();
        let mix = parity_diagonal_mixture(poisson.as_slice(), 2, g, phi).unwrap();
        assert!((mix - parity_coherent_fock(1.5, 2, g, phi).unwrap()).abs() < 1e-12);

        let geo = DiagonalWeights::geometric(2.0, 1e-14).unwrap();
        let mix = parity_diagonal_mixture(geo.as_slice(), 1, 0.5, 0.3).unwrap();
        assert!((mix - parity_thermal_fock(2.0, 1, 0.5, 0.3f64).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn small_phase_expansion_residual() {
        let (g, phi) = (0.5f64, 1e-3);
        let exact = parity_diagonal_mixture(&[0.0, 1.0], 1, g, phi).unwrap();
        let approx = parity_small_phase_expansion(1.0, 1, g, phi).unwrap();
        assert!((exact - approx).abs() < 1e-10);
        assert_eq!(parity_small_phase_expansion(2.0, 3, g, 0.0).unwrap(), -1.0);
    }

    #[test]
    fn two_mode_coherent_at_zero_phase_is_beta_parity() {
        let beta = Complex::new(0.3f64, -0.4);
        let v = parity_two_mode_coherent(Complex::new(1.0, 0.2), beta, 0.7, 0.5, 0.0).unwrap();
        assert_relative_eq!(v, (-2.0 * beta.norm_sqr()).exp(), epsilon = 1e-15);
    }

    #[test]
    fn dispatch_matches_direct_calls() {
        let g = 0.4f64;
        let phi = 0.25;
        assert_eq!(
            parity_signal(&InputSpec::fock(2, 1), g, phi).unwrap(),
            parity_fock_fock(2, 1, g, phi).unwrap()
        );
        assert_eq!(
            parity_signal(&InputSpec::coherent(1.2, 2).unwrap(), g, phi).unwrap(),
            parity_coherent_fock(1.2, 2, g, phi).unwrap()
        );
        assert_eq!(
            parity_signal(&InputSpec::thermal(0.8, 0).unwrap(), g, phi).unwrap(),
            parity_thermal_fock(0.8, 0, g, phi).unwrap()
        );
    }
}
