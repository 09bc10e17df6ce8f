use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::special::ln_factorial;

/// Photon-number distribution `{p_m}` of a phase-averaged mode-a state.
///
/// Infinite families (Poisson, geometric) are truncated; `tail` records the
/// probability mass that was dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalWeights<T> {
    weights: Vec<T>,
    tail: T,
}

impl<T: Scalar> DiagonalWeights<T> {
    /// Validates non-negativity and `|Σ p_m - 1| <= tolerance`.
    pub fn new(weights: Vec<T>, tolerance: T) -> Result<Self> {
        let mut sum = T::zero();
        for (index, &p) in weights.iter().enumerate() {
            if !(p >= T::zero()) || !p.is_finite() {
                return Err(Error::NegativeWeight {
                    index,
                    value: p.to_f64_lossy(),
                });
            }
            sum += p;
        }
        if (sum - T::one()).abs() > tolerance {
            return Err(Error::UnnormalizedWeights {
                sum: sum.to_f64_lossy(),
                tolerance: tolerance.to_f64_lossy(),
            });
        }
        Ok(Self {
            weights,
            tail: T::zero(),
        })
    }

    /// All weight on `|m⟩`.
    pub fn point(m: usize) -> Self {
        let mut weights = vec![T::zero(); m + 1];
        weights[m] = T::one();
        Self {
            weights,
            tail: T::zero(),
        }
    }

    /// Poisson distribution of mean `mean` (coherent state `|α|² = mean`).
    pub fn poisson(mean: T, tail_tol: T) -> Result<Self> {
        check_family_args(mean, tail_tol)?;
        if mean == T::zero() {
            return Ok(Self::point(0));
        }
        let ln_mean = mean.ln();
        let weight = |m: usize| (-mean + T::of_usize(m) * ln_mean - ln_factorial::<T>(m)).exp();
        let mut weights = Vec::new();
        let mut m = 0usize;
        loop {
            weights.push(weight(m));
            // Past the mode the ratio p_{k+1}/p_k = mean/(k+1) < 1, so the
            // tail is bounded by a geometric series.
            let next = T::of_usize(m + 1);
            if next > mean {
                let ratio = mean / (next + T::one());
                let bound = weight(m + 1) / (T::one() - ratio);
                if bound < tail_tol {
                    return Ok(Self { weights, tail: bound });
                }
            }
            m += 1;
        }
    }

    /// Bose-Einstein distribution `p_m = n̄^m / (1+n̄)^(m+1)` (thermal state).
    pub fn geometric(mean: T, tail_tol: T) -> Result<Self> {
        check_family_args(mean, tail_tol)?;
        if mean == T::zero() {
            return Ok(Self::point(0));
        }
        let q = mean / (T::one() + mean);
        let mut weights = Vec::new();
        let mut p = T::one() / (T::one() + mean);
        let mut tail = q;
        weights.push(p);
        // tail after keeping 0..=m is q^(m+1)
        while tail >= tail_tol {
            p *= q;
            weights.push(p);
            tail *= q;
        }
        Ok(Self { weights, tail })
    }

    pub fn as_slice(&self) -> &[T] {
        &self.weights
    }

    pub fn into_vec(self) -> Vec<T> {
        self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Probability mass dropped by truncation.
    pub fn tail(&self) -> T {
        self.tail
    }

    pub fn sum(&self) -> T {
        self.weights.iter().fold(T::zero(), |a, &b| a + b)
    }

    pub fn mean(&self) -> T {
        self.weights
            .iter()
            .enumerate()
            .fold(T::zero(), |acc, (m, &p)| acc + T::of_usize(m) * p)
    }

    /// Largest retained photon number.
    pub fn max_index(&self) -> usize {
        self.weights.len().saturating_sub(1)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, T)> + '_ {
        self.weights.iter().copied().enumerate()
    }
}

fn check_family_args<T: Scalar>(mean: T, tail_tol: T) -> Result<()> {
    if !(mean >= T::zero()) || !mean.is_finite() {
        return Err(Error::InvalidParameter {
            name: "mean",
            value: mean.to_f64_lossy(),
            reason: "must be finite and non-negative",
        });
    }
    if !(tail_tol > T::zero()) {
        return Err(Error::InvalidParameter {
            name: "tail_tol",
            value: tail_tol.to_f64_lossy(),
            reason: "must be positive",
        });
    }
    Ok(())
}
