use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::special::ln_factorial;

/// Default ceiling on the probability pushed past the cutoff.
pub const DEFAULT_LEAK_BUDGET: f64 = 1e-10;

/// Which of the two modes an operation addresses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    A,
    B,
}

/// Pure two-mode state on the truncated basis `|j⟩_a|k⟩_b`, `0 <= j, k <= cutoff`.
///
/// Amplitudes are stored per photon-number-difference sector `d = j - k`.
/// Sector `d` is a line indexed by `r = min(j, k)`; the two-mode squeezer
/// and phase shifts never mix sectors. An unoccupied sector holds no
/// storage. `leaked_norm` is the probability lost past the cutoff so far,
/// and `Σ|amp|² + leaked_norm = 1` up to rounding.
///
/// Amplitude dropped at the cutoff in the middle of an evolution would
/// partly have returned and interfered, so each sector also carries the
/// norm of everything dropped from it. That norm bounds the distance from
/// the untruncated sector state.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeStateVector<T> {
    cutoff: usize,
    lines: Vec<Vec<Complex<T>>>,
    drift: Vec<T>,
    leaked_norm: T,
    leak_budget: T,
    error_budget: T,
}

fn zero<T: Scalar>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

impl<T: Scalar> TwoModeStateVector<T> {
    /// All-zero vector; callers fill it and are responsible for its norm.
    pub fn zeros(cutoff: usize) -> Self {
        Self {
            cutoff,
            lines: vec![Vec::new(); 2 * cutoff + 1],
            drift: vec![T::zero(); 2 * cutoff + 1],
            leaked_norm: T::zero(),
            leak_budget: T::of(DEFAULT_LEAK_BUDGET),
            error_budget: T::infinity(),
        }
    }

    /// `|m⟩_a |n⟩_b`.
    pub fn fock(m: usize, n: usize, cutoff: usize) -> Result<Self> {
        if m.max(n) > cutoff {
            return Err(Error::CutoffTooSmall {
                cutoff,
                reason: format!("Fock input |{m},{n}> lies outside the basis"),
            });
        }
        let mut state = Self::zeros(cutoff);
        state.set_amplitude(m, n, Complex::new(T::one(), T::zero()));
        Ok(state)
    }

    /// Product `|α⟩_a ⊗ |n⟩_b`. The Poisson tail beyond the cutoff starts out
    /// as leaked norm and must stay below `tail_tol`.
    pub fn coherent_fock(alpha: Complex<T>, n: usize, cutoff: usize, tail_tol: T) -> Result<Self> {
        if n > cutoff {
            return Err(Error::CutoffTooSmall {
                cutoff,
                reason: format!("mode-b Fock number {n} lies outside the basis"),
            });
        }
        let amps = coherent_amplitudes(alpha, cutoff);
        let mut state = Self::zeros(cutoff);
        for (m, &c) in amps.iter().enumerate() {
            state.set_amplitude(m, n, c);
        }
        state.leaked_norm = coherent_tail(&amps);
        if state.leaked_norm >= tail_tol {
            return Err(Error::CutoffTooSmall {
                cutoff,
                reason: format!(
                    "coherent tail {:e} exceeds {:e}",
                    state.leaked_norm.to_f64_lossy(),
                    tail_tol.to_f64_lossy()
                ),
            });
        }
        Ok(state)
    }

    /// Product of coherent states `|α⟩_a ⊗ |β⟩_b`.
    pub fn coherent_product(alpha: Complex<T>, beta: Complex<T>, cutoff: usize, tail_tol: T) -> Result<Self> {
        let ca = coherent_amplitudes(alpha, cutoff);
        let cb = coherent_amplitudes(beta, cutoff);
        let mut state = Self::zeros(cutoff);
        for (j, &x) in ca.iter().enumerate() {
            for (k, &y) in cb.iter().enumerate() {
                state.set_amplitude(j, k, x * y);
            }
        }
        let kept = T::one() - state.norm_sqr();
        state.leaked_norm = kept.max(T::zero());
        if state.leaked_norm >= tail_tol {
            return Err(Error::CutoffTooSmall {
                cutoff,
                reason: format!(
                    "coherent tail {:e} exceeds {:e}",
                    state.leaked_norm.to_f64_lossy(),
                    tail_tol.to_f64_lossy()
                ),
            });
        }
        Ok(state)
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn leaked_norm(&self) -> T {
        self.leaked_norm
    }

    pub fn leak_budget(&self) -> T {
        self.leak_budget
    }

    pub fn with_leak_budget(mut self, budget: T) -> Self {
        self.leak_budget = budget;
        self
    }

    /// Ceiling on [`Self::expectation_error_bound`]; unlimited by default.
    pub fn error_budget(&self) -> T {
        self.error_budget
    }

    pub fn with_error_budget(mut self, budget: T) -> Self {
        self.error_budget = budget;
        self
    }

    pub(crate) fn check_error_budget(&self) -> Result<()> {
        if self.error_budget.is_finite() {
            let bound = self.expectation_error_bound();
            if bound > self.error_budget {
                return Err(Error::CutoffTooSmall {
                    cutoff: self.cutoff,
                    reason: format!(
                        "truncation error bound {:e} above {:e}",
                        bound.to_f64_lossy(),
                        self.error_budget.to_f64_lossy()
                    ),
                });
            }
        }
        Ok(())
    }

    pub(crate) fn add_leak(&mut self, lost: T) -> Result<()> {
        self.leaked_norm += lost.max(T::zero());
        self.check_budget()
    }

    /// Bound on `|⟨O⟩_truncated - ⟨O⟩_exact|` for any observable that is
    /// diagonal in the sectors and has operator norm at most 1, parity
    /// included: `Σ_d (2‖ψ_d‖ e_d + e_d²)` with `e_d` the dropped norm of
    /// sector `d`. Probability missing from the input itself is not
    /// included; it enters linearly through `leaked_norm`.
    pub fn expectation_error_bound(&self) -> T {
        let two = T::of(2.0);
        self.lines
            .iter()
            .zip(&self.drift)
            .filter(|(_, e)| **e > T::zero())
            .fold(T::zero(), |acc, (line, &e)| {
                let norm = line.iter().fold(T::zero(), |a, c| a + c.norm_sqr()).sqrt();
                acc + two * norm * e + e * e
            })
    }

    pub(crate) fn check_budget(&self) -> Result<()> {
        if self.leaked_norm > self.leak_budget {
            return Err(Error::LeakBudgetExceeded {
                leaked: self.leaked_norm.to_f64_lossy(),
                budget: self.leak_budget.to_f64_lossy(),
                cutoff: self.cutoff,
            });
        }
        Ok(())
    }

    /// `⟨j, k|ψ⟩`, zero outside the basis.
    pub fn amplitude(&self, j: usize, k: usize) -> Complex<T> {
        if j > self.cutoff || k > self.cutoff {
            return zero();
        }
        let (s, r) = self.locate(j, k);
        self.lines[s].get(r).copied().unwrap_or_else(zero)
    }

    /// Panics if `(j, k)` lies outside the basis.
    pub fn set_amplitude(&mut self, j: usize, k: usize, value: Complex<T>) {
        assert!(
            j <= self.cutoff && k <= self.cutoff,
            "({j}, {k}) outside cutoff {}",
            self.cutoff
        );
        let (s, r) = self.locate(j, k);
        let line = &mut self.lines[s];
        if line.len() <= r {
            if value == zero() {
                return;
            }
            line.resize(r + 1, zero());
        }
        line[r] = value;
    }

    fn locate(&self, j: usize, k: usize) -> (usize, usize) {
        (self.cutoff + j - k, j.min(k))
    }

    /// `Σ |amp|²` over the retained basis.
    pub fn norm_sqr(&self) -> T {
        self.lines.iter().flatten().fold(T::zero(), |acc, c| acc + c.norm_sqr())
    }

    /// Occupied sectors `d = j - k` with their amplitude lines.
    ///
    /// Entry `r` of a line is the amplitude of `|r + max(d,0)⟩|r + max(-d,0)⟩`.
    pub fn sectors(&self) -> impl Iterator<Item = (isize, &[Complex<T>])> + '_ {
        let c = self.cutoff as isize;
        self.lines
            .iter()
            .enumerate()
            .filter(|(_, l)| !l.is_empty())
            .map(move |(s, l)| (s as isize - c, l.as_slice()))
    }

    pub(crate) fn lines_mut(&mut self) -> impl Iterator<Item = (isize, &mut Vec<Complex<T>>, &mut T)> + '_ {
        let c = self.cutoff as isize;
        self.lines
            .iter_mut()
            .zip(self.drift.iter_mut())
            .enumerate()
            .filter(|(_, (l, _))| !l.is_empty())
            .map(move |(s, (l, e))| (s as isize - c, l, e))
    }

    /// Every nonzero amplitude as `(j, k, amp)`, sector by sector.
    pub fn iter_nonzero(&self) -> impl Iterator<Item = (usize, usize, Complex<T>)> + '_ {
        self.sectors().flat_map(|(d, line)| {
            let (a0, b0) = sector_offsets(d);
            line.iter()
                .enumerate()
                .filter(|(_, c)| **c != zero())
                .map(move |(r, &c)| (r + a0, r + b0, c))
        })
    }

    /// Row-major dense copy, index `j * (cutoff + 1) + k`.
    pub fn to_dense(&self) -> Vec<Complex<T>> {
        let dim = self.cutoff + 1;
        let mut out = vec![zero(); dim * dim];
        for (j, k, c) in self.iter_nonzero() {
            out[j * dim + k] = c;
        }
        out
    }

    /// `⟨self|other⟩` over the common basis.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        let mut acc = zero();
        for (j, k, c) in self.iter_nonzero() {
            acc += c.conj() * other.amplitude(j, k);
        }
        acc
    }

    /// Largest `|⟨j,k|self⟩ - ⟨j,k|other⟩|` over both supports.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        let mut worst = T::zero();
        for (j, k, c) in self.iter_nonzero() {
            worst = worst.max((c - other.amplitude(j, k)).norm());
        }
        for (j, k, c) in other.iter_nonzero() {
            worst = worst.max((c - self.amplitude(j, k)).norm());
        }
        worst
    }

    /// Largest photon number present in either mode.
    pub fn max_occupied_index(&self) -> usize {
        self.sectors()
            .map(|(d, line)| {
                let (a0, b0) = sector_offsets(d);
                line.len() - 1 + a0.max(b0)
            })
            .max()
            .unwrap_or(0)
    }
}

/// `(max(d,0), max(-d,0))`: mode indices of rung 0 of sector `d`.
pub(crate) fn sector_offsets(d: isize) -> (usize, usize) {
    (d.max(0) as usize, (-d).max(0) as usize)
}

/// `e^{-|α|²/2} αᵐ/√m!` for `m = 0..=cutoff`.
pub(crate) fn coherent_amplitudes<T: Scalar>(alpha: Complex<T>, cutoff: usize) -> Vec<Complex<T>> {
    let mean = alpha.norm_sqr();
    let arg = alpha.im.atan2(alpha.re);
    (0..=cutoff)
        .map(|m| {
            if mean == T::zero() {
                return if m == 0 {
                    Complex::new(T::one(), T::zero())
                } else {
                    zero()
                };
            }
            let ln_mag = T::of(0.5) * (-mean + T::of_usize(m) * mean.ln() - ln_factorial::<T>(m));
            Complex::from_polar(ln_mag.exp(), T::of_usize(m) * arg)
        })
        .collect()
}

fn coherent_tail<T: Scalar>(amps: &[Complex<T>]) -> T {
    let kept = amps.iter().fold(T::zero(), |acc, c| acc + c.norm_sqr());
    (T::one() - kept).max(T::zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fock_placement() {
        let s = TwoModeStateVector::<f64>::fock(2, 1, 5).unwrap();
        assert_eq!(s.amplitude(2, 1), Complex::new(1.0, 0.0));
        assert_eq!(s.norm_sqr(), 1.0);
        assert_eq!(s.sectors().count(), 1);
        assert_eq!(s.sectors().next().unwrap().0, 1);
        assert!(TwoModeStateVector::<f64>::fock(6, 0, 5).is_err());
    }

    #[test]
    fn dense_round_trip() {
        let mut s = TwoModeStateVector::<f64>::zeros(3);
        s.set_amplitude(0, 3, Complex::new(0.6, 0.0));
        s.set_amplitude(2, 2, Complex::new(0.0, 0.8));
        let dense = s.to_dense();
        assert_eq!(dense[3], Complex::new(0.6, 0.0));
        assert_eq!(dense[2 * 4 + 2], Complex::new(0.0, 0.8));
        assert!((s.norm_sqr() - 1.0).abs() < 1e-15);
        assert_eq!(s.max_occupied_index(), 3);
    }

    #[test]
    fn coherent_tail_is_leak() {
        let s = TwoModeStateVector::coherent_fock(Complex::new(1.0f64, 0.5), 1, 30, 1e-12).unwrap();
        assert!((s.norm_sqr() + s.leaked_norm() - 1.0).abs() < 1e-14);
        assert!(TwoModeStateVector::coherent_fock(Complex::new(3.0f64, 0.0), 0, 5, 1e-12).is_err());
        let v = TwoModeStateVector::coherent_fock(Complex::new(0.0f64, 0.0), 2, 4, 1e-12).unwrap();
        assert_eq!(v.amplitude(0, 2), Complex::new(1.0, 0.0));
    }
}
