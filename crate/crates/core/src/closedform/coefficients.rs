use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::special::ln_factorial;

/// Coefficients of the normally ordered parity measurement operator.
///
/// `s = 2 sin²(φ/2) sinh²(2g)` is the common subexpression; the operator
/// prefactor is `1/(1+s)`. `C·D = |M|²` holds identically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McdCoefficients<T> {
    pub m: Complex<T>,
    pub c: T,
    pub d: T,
    pub s: T,
}

impl<T: Scalar> McdCoefficients<T> {
    /// `1 / (1 + s)`, the vacuum parity signal.
    pub fn prefactor(&self) -> T {
        (T::one() + self.s).recip()
    }
}

pub fn mcd_coefficients<T: Scalar>(g: T, theta: T, phi: T) -> McdCoefficients<T> {
    let two = T::of(2.0);
    let half_sin_sq = (phi / two).sin().powi(2);
    let sinh2g = (two * g).sinh();
    let s = two * half_sin_sq * sinh2g * sinh2g;
    let denom = T::one() + s;
    let inner = Complex::new(-two * half_sin_sq * (two * g).cosh(), phi.sin());
    let m = Complex::from_polar(T::one(), -theta) * inner * (sinh2g / denom);
    McdCoefficients {
        m,
        c: s / denom,
        d: (two + s) / denom,
        s,
    }
}

/// `k ln x`, with `0 ln 0 = 0` so that `g = 0` evaluates cleanly.
fn k_ln<T: Scalar>(k: usize, x: T) -> T {
    if k == 0 {
        T::zero()
    } else {
        T::of_usize(k) * x.ln()
    }
}

/// The `(k, l)` summand of the squeezed-Fock expansion of
/// `U_φ S₂(ξ)|m⟩|n⟩` with the phase in mode a.
///
/// The summand lives on the ket `|m+k-l⟩_a |n+k-l⟩_b`. It vanishes unless
/// `l <= min(m, n)`.
pub fn squeeze_term<T: Scalar>(m: usize, n: usize, k: usize, l: usize, g: T, theta: T, phi: T) -> Complex<T> {
    if l > m.min(n) {
        return Complex::new(T::zero(), T::zero());
    }
    let two = T::of(2.0);
    let tanh = g.tanh();
    let half_sinh2g = (two * g).sinh() / two;
    if (k > 0 && tanh == T::zero()) || (l > 0 && half_sinh2g == T::zero()) {
        return Complex::new(T::zero(), T::zero());
    }
    let a = m + k - l;
    let b = n + k - l;
    let half = T::of(0.5);
    let ln_mag = k_ln(k, tanh) + k_ln(l, half_sinh2g) - T::of_usize(m + n + 1) * g.cosh().ln()
        + half * (ln_factorial::<T>(m) + ln_factorial::<T>(n) + ln_factorial::<T>(a) + ln_factorial::<T>(b))
        - ln_factorial::<T>(k)
        - ln_factorial::<T>(l)
        - ln_factorial::<T>(m - l)
        - ln_factorial::<T>(n - l);
    let mag = if l.is_multiple_of(2) { ln_mag.exp() } else { -ln_mag.exp() };
    let arg = T::of_usize(k) * theta - T::of_usize(l) * theta + T::of_usize(a) * phi;
    Complex::from_polar(mag, arg)
}

/// Ket `(j, k)` that the ladder rung `k` of `S₂|m⟩|n⟩` occupies.
///
/// The squeezer conserves `j - k = m - n`; rung 0 is the lowest reachable
/// ket `|m - min(m,n)⟩|n - min(m,n)⟩`.
pub fn squeeze_ket(m: usize, n: usize, k: usize) -> (usize, usize) {
    let r = m.min(n);
    (m - r + k, n - r + k)
}

/// Amplitude of `U_φ S₂(ξ)|m⟩|n⟩` on the ladder rung `k`, i.e. on the ket
/// returned by [`squeeze_ket`].
///
/// All `(k', l)` summands with `m + k' - l` equal to the rung's mode-a index
/// are collected, so `Σ_k |c_{m,n,k}|² = 1`. When `min(m, n) = 0` only
/// `l = 0` contributes and this is the single-sum coefficient directly.
pub fn squeeze_amplitude_cmnk<T: Scalar>(m: usize, n: usize, k: usize, g: T, theta: T, phi: T) -> Result<Complex<T>> {
    let r = m.min(n);
    let mut acc = Complex::new(T::zero(), T::zero());
    for l in r.saturating_sub(k)..=r {
        let kp = k + l - r;
        acc += squeeze_term(m, n, kp, l, g, theta, phi);
    }
    if !acc.re.is_finite() || !acc.im.is_finite() {
        return Err(Error::NonFinite {
            context: "squeeze_amplitude_cmnk",
        });
    }
    Ok(acc)
}

/// The `l`-summed coefficient at fixed creation order `k`.
///
/// Its summands sit on different kets `|m+k-l⟩|n+k-l⟩`, so for
/// `min(m, n) > 0` this is not the amplitude of a single basis state;
/// [`squeeze_amplitude_cmnk`] is. Kept for comparison.
pub fn squeeze_coefficient_literal<T: Scalar>(m: usize, n: usize, k: usize, g: T, theta: T, phi: T) -> Complex<T> {
    (0..=m.min(n)).fold(Complex::new(T::zero(), T::zero()), |acc, l| {
        acc + squeeze_term(m, n, k, l, g, theta, phi)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn mcd_at_zero_phase_and_zero_gain() {
        for &(g, theta) in &[(0.3, 0.0), (1.1, 2.0), (0.0, 1.0)] {
            let c = mcd_coefficients(g, theta, 0.0f64);
            assert_eq!(c.m, Complex::new(0.0, 0.0));
            assert_eq!(c.c, 0.0);
            assert_eq!(c.d, 2.0);
        }
        let c = mcd_coefficients(0.0f64, 0.4, 1.3);
        assert_eq!(c.m.norm(), 0.0);
        assert_eq!((c.c, c.d), (0.0, 2.0));
    }

    #[test]
    fn mcd_identity_and_ranges() {
        let c = mcd_coefficients(0.5f64, 0.0, 0.3);
        assert_relative_eq!(c.c * c.d, c.m.norm_sqr(), max_relative = 1e-12);
        for &phi in &[0.1, 1.0, PI, 4.0] {
            let c = mcd_coefficients(0.8f64, 0.7, phi);
            assert!(c.c >= 0.0 && c.c < 1.0);
            assert!(c.d > 1.0 && c.d <= 2.0);
            // D - 1 = 1/(1+s)
            assert_relative_eq!(c.d - 1.0, c.prefactor(), max_relative = 1e-14);
        }
    }

    #[test]
    fn vacuum_amplitudes() {
        for &g in &[0.0, 0.4, 1.2] {
            let a = squeeze_amplitude_cmnk(0, 0, 0, g, 0.3, 0.9f64).unwrap();
            assert_relative_eq!(a.re, 1.0 / f64::cosh(g), epsilon = 1e-15);
            assert!(a.im.abs() < 1e-15);
        }
        let g = 0.6f64;
        let a = squeeze_amplitude_cmnk(0, 0, 1, g, 0.0, 0.0).unwrap();
        assert_relative_eq!(a.re, g.tanh() / g.cosh(), epsilon = 1e-15);
    }

    #[test]
    fn literal_matches_amplitude_without_lowering() {
        for &(m, n) in &[(0, 0), (3, 0), (0, 2)] {
            for k in 0..6 {
                let lit = squeeze_coefficient_literal(m, n, k, 0.7, 0.4, 0.2f64);
                let amp = squeeze_amplitude_cmnk(m, n, k, 0.7, 0.4, 0.2f64).unwrap();
                assert!((lit - amp).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn literal_is_not_normalized_with_lowering() {
        let total: f64 = (0..200)
            .map(|k| squeeze_coefficient_literal(1, 1, k, 0.3, 0.4, 0.2f64).norm_sqr())
            .sum();
        assert!((total - 1.0).abs() > 0.1);
        let total: f64 = (0..200)
            .map(|k| squeeze_amplitude_cmnk(1, 1, k, 0.3, 0.4, 0.2f64).unwrap().norm_sqr())
            .sum();
        assert!((total - 1.0).abs() < 1e-13);
    }

    #[test]
    fn ket_layout() {
        assert_eq!(squeeze_ket(2, 1, 0), (1, 0));
        assert_eq!(squeeze_ket(2, 1, 3), (4, 3));
        assert_eq!(squeeze_ket(0, 4, 2), (2, 6));
    }

    #[test]
    fn large_photon_numbers_stay_finite() {
        let a = squeeze_amplitude_cmnk(60, 55, 120, 1.2, 0.1, 0.3f64).unwrap();
        assert!(a.norm().is_finite());
    }
}
