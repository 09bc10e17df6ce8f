use num_complex::Complex;

use super::ops::evolve_through_interferometer;
use super::state::TwoModeStateVector;
use crate::closedform::{InputSpec, InterferometerConfig, ModeAState};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Tolerance on `Σ w = 1` for an ensemble.
pub const ENSEMBLE_WEIGHT_TOLERANCE: f64 = 1e-12;

/// Tolerance on `Σ|amp|² + leaked = 1` for each member.
pub const MEMBER_NORM_TOLERANCE: f64 = 1e-9;

/// Default truncation of infinite photon-number distributions.
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

/// Density operator `Σ_i w_i |ψ_i⟩⟨ψ_i|` kept as weighted pure branches.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureEnsemble<T> {
    members: Vec<(T, TwoModeStateVector<T>)>,
}

impl<T: Scalar> MixtureEnsemble<T> {
    pub fn new(members: Vec<(T, TwoModeStateVector<T>)>) -> Result<Self> {
        let mut total = T::zero();
        for (index, (w, state)) in members.iter().enumerate() {
            if !(*w >= T::zero()) || !w.is_finite() {
                return Err(Error::NegativeWeight {
                    index,
                    value: w.to_f64_lossy(),
                });
            }
            total += *w;
            let norm = state.norm_sqr() + state.leaked_norm();
            if (norm - T::one()).abs() > T::of(MEMBER_NORM_TOLERANCE) {
                return Err(Error::NonFinite {
                    context: "ensemble member is not normalized",
                });
            }
        }
        if (total - T::one()).abs() > T::of(ENSEMBLE_WEIGHT_TOLERANCE) {
            return Err(Error::UnnormalizedWeights {
                sum: total.to_f64_lossy(),
                tolerance: ENSEMBLE_WEIGHT_TOLERANCE,
            });
        }
        Ok(Self { members })
    }

    pub fn pure(state: TwoModeStateVector<T>) -> Self {
        Self {
            members: vec![(T::one(), state)],
        }
    }

    pub fn members(&self) -> &[(T, TwoModeStateVector<T>)] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// `Σ_i w_i · leaked_i`.
    pub fn leaked_norm(&self) -> T {
        self.members
            .iter()
            .fold(T::zero(), |acc, (w, s)| acc + *w * s.leaked_norm())
    }

    pub fn with_leak_budget(self, budget: T) -> Self {
        Self {
            members: self
                .members
                .into_iter()
                .map(|(w, s)| (w, s.with_leak_budget(budget)))
                .collect(),
        }
    }
}

/// Truncated-basis representation of `input`.
///
/// A coherent mode-a state becomes one pure member; thermal and explicit
/// diagonal states become one Fock branch per retained photon number, since
/// phase averaging leaves only the diagonal. Infinite distributions are
/// truncated once their tail falls below `tail_tol`, and the cutoff must
/// hold everything retained.
pub fn build_input<T: Scalar>(spec: &InputSpec<T>, cutoff: usize, tail_tol: T) -> Result<MixtureEnsemble<T>> {
    let n = spec.n;
    match &spec.mode_a {
        ModeAState::Fock(m) => Ok(MixtureEnsemble::pure(TwoModeStateVector::fock(*m, n, cutoff)?)),
        ModeAState::Coherent { mean, phase } => {
            let alpha = Complex::from_polar(mean.sqrt(), *phase);
            Ok(MixtureEnsemble::pure(TwoModeStateVector::coherent_fock(
                alpha, n, cutoff, tail_tol,
            )?))
        }
        ModeAState::Thermal { .. } | ModeAState::Diagonal(_) => {
            let weights = spec.diagonal_weights(tail_tol)?;
            let top = weights.max_index();
            if top.max(n) > cutoff {
                return Err(Error::CutoffTooSmall {
                    cutoff,
                    reason: format!(
                        "photon number {} needed for tail {:e}",
                        top.max(n),
                        tail_tol.to_f64_lossy()
                    ),
                });
            }
            let mut members = Vec::new();
            for (m, w) in weights.iter() {
                if w > T::zero() {
                    members.push((w, TwoModeStateVector::fock(m, n, cutoff)?));
                }
            }
            // the truncated tail is part of the weight budget
            let tol = T::of(ENSEMBLE_WEIGHT_TOLERANCE).max(weights.tail() * T::of(1.0 + 1e-6));
            let total = weights.sum();
            if (total - T::one()).abs() > tol {
                return Err(Error::UnnormalizedWeights {
                    sum: total.to_f64_lossy(),
                    tolerance: tol.to_f64_lossy(),
                });
            }
            Ok(MixtureEnsemble { members })
        }
    }
}

/// Sends every member through the interferometer.
pub fn interferometer_output<T: Scalar>(
    ensemble: MixtureEnsemble<T>,
    config: &InterferometerConfig<T>,
) -> Result<MixtureEnsemble<T>> {
    let mut members = ensemble.members;
    for (_, state) in members.iter_mut() {
        evolve_through_interferometer(state, config)?;
    }
    Ok(MixtureEnsemble { members })
}

/// Diagonal `p_m = c_{m,m}` of a density-operator table, which is what
/// averaging over a uniformly random global phase leaves behind.
pub fn phase_average_diagonal<T: Scalar>(table: &[Vec<Complex<T>>]) -> Result<Vec<T>> {
    let dim = table.len();
    let tol = T::of(1e-9);
    for (i, row) in table.iter().enumerate() {
        if row.len() != dim {
            return Err(Error::InvalidDensity(format!(
                "row {i} has {} entries, expected {dim}",
                row.len()
            )));
        }
    }
    let mut trace = T::zero();
    let mut diag = Vec::with_capacity(dim);
    for i in 0..dim {
        for j in 0..i {
            if (table[i][j] - table[j][i].conj()).norm() > tol {
                return Err(Error::InvalidDensity(format!("not Hermitian at ({i}, {j})")));
            }
        }
        let c = table[i][i];
        if c.im.abs() > tol || c.re < -tol {
            return Err(Error::InvalidDensity(format!(
                "diagonal entry {i} is not a probability"
            )));
        }
        let p = c.re.max(T::zero());
        trace += p;
        diag.push(p);
    }
    if (trace - T::one()).abs() > tol {
        return Err(Error::InvalidDensity(format!(
            "trace {} differs from 1",
            trace.to_f64_lossy()
        )));
    }
    Ok(diag)
}
