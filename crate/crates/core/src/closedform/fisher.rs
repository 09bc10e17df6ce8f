use super::require_gain;
use crate::error::{check_nonneg, Error, Result};
use crate::scalar::Scalar;

fn sinh_sq_2g<T: Scalar>(g: T) -> T {
    (T::of(2.0) * g).sinh().powi(2)
}

/// QFI of the pure state `U_φ S₂|m⟩|n⟩`: `(2mn + m + n + 1) sinh²(2g)`.
pub fn qfi_pure_fock<T: Scalar>(m: usize, n: usize, g: T) -> Result<T> {
    require_gain(g)?;
    Ok(T::of_usize(2 * m * n + m + n + 1) * sinh_sq_2g(g))
}

/// QFI of the phase-averaged input: `(2 n̄_a n + n̄_a + n + 1) sinh²(2g)`.
///
/// Depends on the mode-a state only through its mean photon number.
pub fn qfi_diagonal_mixture<T: Scalar>(mean_a: T, n: usize, g: T) -> Result<T> {
    require_gain(g)?;
    check_nonneg("mean_a", mean_a.to_f64_lossy())?;
    let nf = T::of_usize(n);
    Ok((T::of(2.0) * mean_a * nf + mean_a + nf + T::one()) * sinh_sq_2g(g))
}

/// Total mean photon number between the two OPAs:
/// `(n̄_a + n) cosh(2g) + 2 sinh²(g)`.
pub fn total_mean_photon_number<T: Scalar>(mean_a: T, n: usize, g: T) -> Result<T> {
    require_gain(g)?;
    check_nonneg("mean_a", mean_a.to_f64_lossy())?;
    let two = T::of(2.0);
    Ok((mean_a + T::of_usize(n)) * (two * g).cosh() + two * g.sinh().powi(2))
}

/// Quantum Cramér-Rao bound `1/√F_Q`.
pub fn qcrb<T: Scalar>(mean_a: T, n: usize, g: T) -> Result<T> {
    let f = qfi_diagonal_mixture(mean_a, n, g)?;
    if f <= T::zero() {
        return Err(Error::NoPhaseInformation);
    }
    Ok(f.sqrt().recip())
}

/// Shot-noise and Heisenberg limits `(1/√N, 1/N)` for `N` photons inside
/// the interferometer.
pub fn benchmark_limits<T: Scalar>(n_tot: T) -> Result<(T, T)> {
    if !(n_tot > T::zero()) || !n_tot.is_finite() {
        return Err(Error::InvalidParameter {
            name: "n_tot",
            value: n_tot.to_f64_lossy(),
            reason: "must be positive",
        });
    }
    Ok((n_tot.sqrt().recip(), n_tot.recip()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn qfi_reductions() {
        for &g in &[0.0, 0.3, 1.0f64] {
            let base = (2.0 * g).sinh().powi(2);
            assert_relative_eq!(qfi_pure_fock(0, 0, g).unwrap(), base);
            assert_relative_eq!(qfi_diagonal_mixture(0.0, 0, g).unwrap(), base);
        }
        assert_relative_eq!(qfi_pure_fock(1, 1, 0.5f64).unwrap(), 5.0 * 1.0f64.sinh().powi(2));
        assert_relative_eq!(qfi_pure_fock(3, 2, 1.0f64).unwrap(), 18.0 * 2.0f64.sinh().powi(2));
        assert_relative_eq!(
            qfi_diagonal_mixture(2.5, 1, 0.8f64).unwrap(),
            9.5 * 1.6f64.sinh().powi(2),
            max_relative = 1e-15
        );
    }

    #[test]
    fn qfi_pure_and_mixture_agree_on_fock() {
        for m in 0..5 {
            for n in 0..5 {
                assert_relative_eq!(
                    qfi_pure_fock(m, n, 0.7f64).unwrap(),
                    qfi_diagonal_mixture(m as f64, n, 0.7).unwrap(),
                    max_relative = 1e-15
                );
            }
        }
    }

    #[test]
    fn photon_number_cases() {
        assert_relative_eq!(total_mean_photon_number(1.5, 2, 0.0f64).unwrap(), 3.5);
        let g = 0.9f64;
        assert_relative_eq!(total_mean_photon_number(0.0, 0, g).unwrap(), 2.0 * g.sinh().powi(2));
        assert_relative_eq!(
            total_mean_photon_number(1.0, 2, 0.6f64).unwrap(),
            3.0 * 1.2f64.cosh() + 2.0 * 0.6f64.sinh().powi(2),
            max_relative = 1e-15
        );
    }

    #[test]
    fn qcrb_cases() {
        let g = 0.45f64;
        assert_relative_eq!(qcrb(0.0, 0, g).unwrap(), 1.0 / (2.0 * g).sinh(), max_relative = 1e-15);
        assert_eq!(qcrb(1.0, 2, 0.0f64), Err(Error::NoPhaseInformation));
        assert_relative_eq!(
            qcrb(2.0, 3, 0.9f64).unwrap(),
            1.0 / (18.0 * 1.8f64.sinh().powi(2)).sqrt(),
            max_relative = 1e-15
        );
    }

    #[test]
    fn limits() {
        assert_eq!(benchmark_limits(1.0f64).unwrap(), (1.0, 1.0));
        let (snl, hl) = benchmark_limits(100.0f64).unwrap();
        assert_relative_eq!(snl, 0.1);
        assert_relative_eq!(hl, 0.01);
        assert!(benchmark_limits(0.0f64).is_err());
        assert!(benchmark_limits(-2.0f64).is_err());
        for k in 1..50 {
            let (snl, hl) = benchmark_limits(k as f64 * 0.7 + 1.0).unwrap();
            assert!(hl <= snl);
        }
    }
}
