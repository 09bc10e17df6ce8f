use num_complex::Complex;

use super::ensemble::{build_input, DEFAULT_TAIL_TOL};
use super::observables::{parity_matrix_element, state_parity, state_photon_statistics};
use super::ops::{apply_phase_shift, apply_two_mode_squeezer, evolve_through_interferometer, Direction};
use super::state::{Mode, TwoModeStateVector, DEFAULT_LEAK_BUDGET};
use crate::closedform::{
    DiagonalWeights, InputSpec, InterferometerConfig, ModeAState, PhaseMode, MIXTURE_NORM_TOLERANCE,
};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Per-member leak budgets are never loosened beyond this.
const MEMBER_BUDGET_CAP: f64 = 1e-4;

/// Default bound on the truncation error of a parity expectation.
pub const DEFAULT_ERROR_TOLERANCE: f64 = 1e-11;

/// How the simulator picks its Fock cutoff.
///
/// Starting from `ceil(2 (max input index + 1) e^{4g}) + 200`, which covers
/// the widest state the balanced interferometer produces, the cutoff is
/// doubled until the run finishes with at most `leak_budget` probability
/// lost and an expectation error bound of at most `error_tolerance`. A
/// `refinement` above 1 then repeats the run at that multiple of the
/// accepted cutoff.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutoffPolicy {
    pub leak_budget: f64,
    pub error_tolerance: f64,
    pub tail_tol: f64,
    pub max_cutoff: usize,
    pub refinement: usize,
}

impl Default for CutoffPolicy {
    fn default() -> Self {
        Self {
            leak_budget: DEFAULT_LEAK_BUDGET,
            error_tolerance: DEFAULT_ERROR_TOLERANCE,
            tail_tol: DEFAULT_TAIL_TOL,
            max_cutoff: 1 << 14,
            refinement: 1,
        }
    }
}

impl CutoffPolicy {
    /// Same policy, rerun at `factor` times the accepted cutoff.
    pub fn refined(self, factor: usize) -> Self {
        Self {
            refinement: factor.max(1),
            ..self
        }
    }

    /// First cutoff tried. Lines only grow as far as their support, so an
    /// oversized cutoff costs little while a failed attempt costs a full run.
    pub fn initial_cutoff(&self, max_index: usize, g: f64) -> usize {
        let guess = (2.0 * (max_index + 1) as f64 * (4.0 * g).exp()).ceil() as usize + 200;
        guess.min(self.max_cutoff)
    }
}

/// A state run to completion under a [`CutoffPolicy`].
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyRun<T> {
    pub state: TwoModeStateVector<T>,
    /// Cutoff of the returned state, after refinement.
    pub cutoff: usize,
}

/// Calls `attempt` with growing cutoffs until it stops failing for lack of
/// room, then applies the policy's refinement. Returns the result and the
/// cutoff that produced it.
fn grow_cutoff<T, R, A>(max_index: usize, g: T, policy: &CutoffPolicy, attempt: A) -> Result<(R, usize)>
where
    T: Scalar,
    A: Fn(usize) -> Result<R>,
{
    let mut cutoff = policy.initial_cutoff(max_index, g.to_f64_lossy());
    loop {
        if cutoff > policy.max_cutoff {
            return Err(Error::CutoffExhausted {
                max_cutoff: policy.max_cutoff,
            });
        }
        match attempt(cutoff) {
            Ok(out) => {
                if policy.refinement <= 1 {
                    return Ok((out, cutoff));
                }
                let fine = cutoff * policy.refinement;
                return Ok((attempt(fine)?, fine));
            }
            Err(Error::LeakBudgetExceeded { .. }) | Err(Error::CutoffTooSmall { .. }) => cutoff *= 2,
            Err(e) => return Err(e),
        }
    }
}

/// Builds a state with `build(cutoff)` and evolves it with `evolve`,
/// growing the cutoff until the leak stays within `budget` and the
/// expectation error bound within `error_tol`.
pub fn run_with_policy<T, B, E>(
    build: B,
    evolve: E,
    max_index: usize,
    g: T,
    (budget, error_tol): (T, T),
    policy: &CutoffPolicy,
) -> Result<PolicyRun<T>>
where
    T: Scalar,
    B: Fn(usize) -> Result<TwoModeStateVector<T>>,
    E: Fn(&mut TwoModeStateVector<T>) -> Result<()>,
{
    let (state, cutoff) = grow_cutoff(max_index, g, policy, |cutoff| {
        let mut state = build(cutoff)?.with_leak_budget(budget).with_error_budget(error_tol);
        state.check_budget()?;
        evolve(&mut state)?;
        state.check_error_budget()?;
        Ok(state)
    })?;
    Ok(PolicyRun { state, cutoff })
}

/// Oracle value together with the resources it took.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleValue<T> {
    pub value: T,
    /// Largest cutoff used by any member.
    pub cutoff: usize,
    /// `Σ_i w_i · leaked_i`.
    pub leaked: T,
    /// `Σ_i w_i (leaked_i + bound_i)`: bound on `|value - exact|` from truncation.
    pub error_bound: T,
    pub members: usize,
}

/// One observable read off one evolved branch.
#[derive(Debug, Clone, Copy)]
struct Reading<T> {
    value: T,
    leaked: T,
    bound: T,
}

impl<T: Scalar> Reading<T> {
    fn of(value: T, state: &TwoModeStateVector<T>) -> Self {
        Self {
            value,
            leaked: state.leaked_norm(),
            bound: state.leaked_norm() + state.expectation_error_bound(),
        }
    }
}

/// Tolerance for a branch of weight `w` among `count`: the weighted
/// per-branch values then sum to at most `budget`.
fn member_budget<T: Scalar>(budget: T, w: T, count: usize) -> T {
    let scaled = budget / (w * T::of_usize(count));
    scaled.max(budget).min(T::of(MEMBER_BUDGET_CAP).max(budget))
}

fn policy_budgets<T: Scalar>(policy: &CutoffPolicy) -> (T, T) {
    (T::of(policy.leak_budget), T::of(policy.error_tolerance))
}

fn single<T: Scalar>(value: T, run: &PolicyRun<T>) -> OracleValue<T> {
    OracleValue {
        value,
        cutoff: run.cutoff,
        leaked: run.state.leaked_norm(),
        error_bound: run.state.leaked_norm() + run.state.expectation_error_bound(),
        members: 1,
    }
}

/// Runs every pure branch of `input` through `run`, each branch with its
/// own cutoff, and returns the weighted sums of the `points` readings.
///
/// `run` receives the freshly built branch with its budgets set and must
/// return exactly `points` readings.
fn stream_branches<T, F>(
    input: &InputSpec<T>,
    g: T,
    policy: &CutoffPolicy,
    points: usize,
    run: F,
) -> Result<Vec<OracleValue<T>>>
where
    T: Scalar,
    F: Fn(TwoModeStateVector<T>) -> Result<Vec<Reading<T>>>,
{
    let (budget, error_tol) = policy_budgets::<T>(policy);
    let tail_tol = T::of(policy.tail_tol);
    let n = input.n;
    let branches: Vec<(usize, T)> = match &input.mode_a {
        ModeAState::Coherent { mean, .. } => vec![(DiagonalWeights::poisson(*mean, tail_tol)?.max_index(), T::one())],
        _ => input
            .diagonal_weights(tail_tol)?
            .iter()
            .filter(|(_, w)| *w > T::zero())
            .collect(),
    };
    let count = branches.len();
    let blank = OracleValue {
        value: T::zero(),
        cutoff: 0,
        leaked: T::zero(),
        error_bound: T::zero(),
        members: count,
    };
    let mut out = vec![blank; points];
    for &(m, w) in &branches {
        let budgets = (member_budget(budget, w, count), member_budget(error_tol, w, count));
        let (readings, cutoff) = grow_cutoff(m.max(n), g, policy, |cutoff| {
            let state = match &input.mode_a {
                ModeAState::Coherent { .. } => build_input(input, cutoff, tail_tol)?.members()[0].1.clone(),
                _ => TwoModeStateVector::fock(m, n, cutoff)?,
            };
            let state = state.with_leak_budget(budgets.0).with_error_budget(budgets.1);
            state.check_budget()?;
            run(state)
        })?;
        assert_eq!(readings.len(), points, "one reading per point");
        for (acc, r) in out.iter_mut().zip(readings) {
            acc.value += w * r.value;
            acc.leaked += w * r.leaked;
            acc.error_bound += w * r.bound;
            acc.cutoff = acc.cutoff.max(cutoff);
        }
    }
    Ok(out)
}

/// Parity of mode b at the interferometer output, by direct evolution.
pub fn oracle_parity<T: Scalar>(
    input: &InputSpec<T>,
    config: &InterferometerConfig<T>,
    policy: &CutoffPolicy,
) -> Result<OracleValue<T>> {
    let mut out = oracle_parity_sweep(
        input,
        (config.gain, config.opa_phase),
        &[config.phase],
        config.phase_mode,
        policy,
    )?;
    Ok(out.remove(0))
}

/// Mode-b parity at each phase of `phases`, same input and OPAs.
///
/// The first OPA does not depend on the phase, so each branch passes
/// through it once per attempt and is then copied for every phase.
pub fn oracle_parity_sweep<T: Scalar>(
    input: &InputSpec<T>,
    (gain, opa_phase): (T, T),
    phases: &[T],
    placement: PhaseMode,
    policy: &CutoffPolicy,
) -> Result<Vec<OracleValue<T>>> {
    stream_branches(input, gain, policy, phases.len(), |mut state| {
        apply_two_mode_squeezer(&mut state, gain, opa_phase, Direction::Forward)?;
        state.check_error_budget()?;
        phases
            .iter()
            .map(|&phi| {
                let mut s = state.clone();
                apply_phase_shift(&mut s, phi, placement.into());
                apply_two_mode_squeezer(&mut s, gain, opa_phase, Direction::Inverse)?;
                s.check_error_budget()?;
                Ok(Reading::of(state_parity(&s, Mode::B), &s))
            })
            .collect()
    })
}

/// Mode-b parity for the two-mode coherent input `|α⟩|β⟩`.
pub fn oracle_parity_two_mode_coherent<T: Scalar>(
    alpha: Complex<T>,
    beta: Complex<T>,
    config: &InterferometerConfig<T>,
    policy: &CutoffPolicy,
) -> Result<OracleValue<T>> {
    let tail_tol = T::of(policy.tail_tol);
    let top = |x: Complex<T>| DiagonalWeights::poisson(x.norm_sqr(), tail_tol).map(|w| w.max_index());
    let run = run_with_policy(
        |c| TwoModeStateVector::coherent_product(alpha, beta, c, tail_tol),
        |s| evolve_through_interferometer(s, config),
        top(alpha)?.max(top(beta)?),
        config.gain,
        policy_budgets(policy),
        policy,
    )?;
    Ok(single(state_parity(&run.state, Mode::B), &run))
}

/// `S₂(g, θ)|m, n⟩` under the policy.
pub fn squeezed_fock<T: Scalar>(m: usize, n: usize, g: T, theta: T, policy: &CutoffPolicy) -> Result<PolicyRun<T>> {
    run_with_policy(
        |c| TwoModeStateVector::fock(m, n, c),
        |s| apply_two_mode_squeezer(s, g, theta, Direction::Forward),
        m.max(n),
        g,
        policy_budgets(policy),
        policy,
    )
}

/// `4 Var(n̂_a)` on `S₂(g, θ)|m, n⟩`: the QFI of a pure state under the
/// generator `n̂_a`.
pub fn oracle_qfi_pure<T: Scalar>(m: usize, n: usize, g: T, theta: T, policy: &CutoffPolicy) -> Result<T> {
    let run = squeezed_fock(m, n, g, theta, policy)?;
    Ok(T::of(4.0) * state_photon_statistics(&run.state).var_a)
}

/// `Σ_m p_m · 4 Var(n̂_a)` over Fock branches, the QFI of a diagonal mixture.
pub fn oracle_qfi_mixture<T: Scalar>(weights: &[T], n: usize, g: T, policy: &CutoffPolicy) -> Result<T> {
    let weights = DiagonalWeights::new(weights.to_vec(), T::of(MIXTURE_NORM_TOLERANCE))?;
    let mut acc = T::zero();
    for (m, p) in weights.iter() {
        if p > T::zero() {
            acc += p * oracle_qfi_pure(m, n, g, T::zero(), policy)?;
        }
    }
    Ok(acc)
}

/// Mean photon numbers `(⟨n̂_a⟩, ⟨n̂_b⟩)` after the first OPA, for any input.
pub fn oracle_mean_photons<T: Scalar>(input: &InputSpec<T>, g: T, theta: T, policy: &CutoffPolicy) -> Result<(T, T)> {
    let out = stream_branches(input, g, policy, 2, |mut state| {
        apply_two_mode_squeezer(&mut state, g, theta, Direction::Forward)?;
        state.check_error_budget()?;
        let stats = state_photon_statistics(&state);
        Ok(vec![
            Reading::of(stats.mean_a, &state),
            Reading::of(stats.mean_b, &state),
        ])
    })?;
    Ok((out[0].value, out[1].value))
}

/// `⟨m', n| U† Π_b U |m, n⟩` at a common cutoff: the contribution of the
/// coherence `|m⟩⟨m'|` of the mode-a state to the parity signal.
pub fn off_diagonal_parity<T: Scalar>(
    m: usize,
    m_prime: usize,
    n: usize,
    config: &InterferometerConfig<T>,
    cutoff: usize,
) -> Result<Complex<T>> {
    let mut ket = TwoModeStateVector::fock(m, n, cutoff)?;
    let mut bra = TwoModeStateVector::fock(m_prime, n, cutoff)?;
    evolve_through_interferometer(&mut ket, config)?;
    evolve_through_interferometer(&mut bra, config)?;
    Ok(parity_matrix_element(&bra, &ket, Mode::B))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closedform::{parity_fock_fock, qfi_pure_fock};

    #[test]
    fn member_budget_rule() {
        assert_eq!(member_budget(1e-10, 1.0f64, 1), 1e-10);
        assert_eq!(member_budget(1e-10, 0.5f64, 4), 1e-10);
        assert!((member_budget(1e-10, 1e-3f64, 10) - 1e-8).abs() < 1e-20);
        assert_eq!(member_budget(1e-10, 1e-20f64, 10), 1e-4);
    }

    #[test]
    fn fock_parity_against_closed_form() {
        let policy = CutoffPolicy::default();
        let config = InterferometerConfig::lower(0.5f64, 0.0, 0.3).unwrap();
        let v = oracle_parity(&InputSpec::fock(1, 1), &config, &policy).unwrap();
        let c = parity_fock_fock(1, 1, 0.5, 0.3).unwrap();
        assert!((v.value - c).abs() < 1e-10);
        assert!(v.leaked < 1e-10);
    }

    #[test]
    fn qfi_examples() {
        let policy = CutoffPolicy::default();
        let q = oracle_qfi_pure(2, 1, 0.7f64, 0.0, &policy).unwrap();
        assert!((q / (8.0 * 1.4f64.sinh().powi(2)) - 1.0).abs() < 1e-8);
        assert_eq!(oracle_qfi_pure(3, 2, 0.0f64, 0.0, &policy).unwrap(), 0.0);
        let q0 = oracle_qfi_pure(0, 0, 0.4f64, 1.0, &policy).unwrap();
        assert!((q0 / qfi_pure_fock(0, 0, 0.4).unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn off_diagonal_blocks_vanish() {
        let config = InterferometerConfig::lower(0.6f64, 0.2, 0.9).unwrap();
        let v = off_diagonal_parity(1, 2, 1, &config, 80).unwrap();
        assert_eq!(v.norm(), 0.0);
    }

    #[test]
    fn exhausted_policy_reports() {
        let policy = CutoffPolicy {
            max_cutoff: 30,
            ..CutoffPolicy::default()
        };
        let config = InterferometerConfig::lower(1.0f64, 0.0, 3.0).unwrap();
        let r = oracle_parity(&InputSpec::fock(4, 4), &config, &policy);
        assert!(matches!(r, Err(Error::CutoffExhausted { .. })));
    }
}
