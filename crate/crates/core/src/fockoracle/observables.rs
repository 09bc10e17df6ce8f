use num_complex::Complex;

use super::ensemble::MixtureEnsemble;
use super::state::{sector_offsets, Mode, TwoModeStateVector};
use crate::scalar::Scalar;

/// `Σ_{j,k} (-1)^{k} |amp(j,k)|²` for mode b, `(-1)^{j}` for mode a.
///
/// Not renormalized: leaked probability contributes nothing.
pub fn state_parity<T: Scalar>(state: &TwoModeStateVector<T>, mode: Mode) -> T {
    let mut acc = T::zero();
    for (d, line) in state.sectors() {
        let (a0, b0) = sector_offsets(d);
        let base = match mode {
            Mode::A => a0,
            Mode::B => b0,
        };
        for (r, c) in line.iter().enumerate() {
            let p = c.norm_sqr();
            if (r + base) % 2 == 0 {
                acc += p;
            } else {
                acc -= p;
            }
        }
    }
    acc
}

/// Weighted parity over all members.
pub fn parity_expectation<T: Scalar>(ensemble: &MixtureEnsemble<T>, mode: Mode) -> T {
    ensemble
        .members()
        .iter()
        .fold(T::zero(), |acc, (w, s)| acc + *w * state_parity(s, mode))
}

/// `⟨other| Π |state⟩` with `Π` the parity of `mode`.
pub fn parity_matrix_element<T: Scalar>(
    other: &TwoModeStateVector<T>,
    state: &TwoModeStateVector<T>,
    mode: Mode,
) -> Complex<T> {
    let mut acc = Complex::new(T::zero(), T::zero());
    for (j, k, c) in state.iter_nonzero() {
        let idx = match mode {
            Mode::A => j,
            Mode::B => k,
        };
        let term = other.amplitude(j, k).conj() * c;
        acc = if idx % 2 == 0 { acc + term } else { acc - term };
    }
    acc
}

/// First and second moments of both photon numbers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonStatistics<T> {
    pub mean_a: T,
    pub mean_b: T,
    pub var_a: T,
    pub var_b: T,
}

/// Moments of `n̂_a`, `n̂_b` over a single state, normalized by its retained norm.
pub fn state_photon_statistics<T: Scalar>(state: &TwoModeStateVector<T>) -> PhotonStatistics<T> {
    photon_statistics(&MixtureEnsemble::pure(state.clone()))
}

/// Exact moments of `n̂_a` and `n̂_b` over the ensemble.
///
/// Each member is normalized by its retained norm, so leaked probability
/// does not bias the moments downward.
pub fn photon_statistics<T: Scalar>(ensemble: &MixtureEnsemble<T>) -> PhotonStatistics<T> {
    let (mut ma, mut mb, mut sa, mut sb) = (T::zero(), T::zero(), T::zero(), T::zero());
    for (w, state) in ensemble.members() {
        let norm = state.norm_sqr();
        if norm == T::zero() {
            continue;
        }
        let scale = *w / norm;
        for (j, k, c) in state.iter_nonzero() {
            let p = c.norm_sqr() * scale;
            let (jf, kf) = (T::of_usize(j), T::of_usize(k));
            ma += p * jf;
            mb += p * kf;
            sa += p * jf * jf;
            sb += p * kf * kf;
        }
    }
    PhotonStatistics {
        mean_a: ma,
        mean_b: mb,
        var_a: (sa - ma * ma).max(T::zero()),
        var_b: (sb - mb * mb).max(T::zero()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fock_parities() {
        let vac = MixtureEnsemble::pure(TwoModeStateVector::<f64>::fock(0, 0, 2).unwrap());
        assert_eq!(parity_expectation(&vac, Mode::B), 1.0);
        let one = MixtureEnsemble::pure(TwoModeStateVector::<f64>::fock(0, 1, 2).unwrap());
        assert_eq!(parity_expectation(&one, Mode::B), -1.0);
        assert_eq!(parity_expectation(&one, Mode::A), 1.0);
    }

    #[test]
    fn coherent_mode_b_parity() {
        let beta = Complex::new(0.7f64, -0.3);
        let s = TwoModeStateVector::coherent_product(Complex::new(0.0, 0.0), beta, 40, 1e-14).unwrap();
        let expect = (-2.0 * beta.norm_sqr()).exp();
        assert!((state_parity(&s, Mode::B) - expect).abs() < 1e-13);
    }

    #[test]
    fn fock_moments() {
        let s = TwoModeStateVector::<f64>::fock(3, 2, 5).unwrap();
        let st = state_photon_statistics(&s);
        assert_eq!((st.mean_a, st.mean_b, st.var_a, st.var_b), (3.0, 2.0, 0.0, 0.0));
    }
}
