use num_complex::Complex;

use super::state::{sector_offsets, Mode, TwoModeStateVector};
use crate::closedform::{InterferometerConfig, PhaseMode};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::special::bessel_j_orders;

/// Target Chebyshev argument `z = s·λ` for one propagation chunk, as a
/// fraction of the line length, and its floor.
const CHUNK_PER_RUNG: f64 = 0.5;
const MIN_CHUNK: f64 = 24.0;

/// Chebyshev terms are kept while `|J_k(z)|` is above this.
const CHEBYSHEV_TOLERANCE: f64 = 1e-19;

/// Upper bound on `tanh(g_step) · (largest mode index + 1)` for one ladder
/// substep. Intermediate terms of a ladder series then exceed the result
/// by at most `e^6`.
pub const SUBSTEP_STRENGTH: f64 = 6.0;

/// Ladder series stop once a term is this small relative to the line peak.
const SERIES_TOLERANCE: f64 = 1e-17;

/// Trailing amplitudes this far below the largest amplitude of the state
/// are dropped when the state has no error budget.
const TAIL_TRIM: f64 = 1e-22;

/// With an error budget `t`, the trim level is `t` times this, clamped to
/// `[TAIL_TRIM, MAX_TAIL_TRIM]`. Trimmed pieces count toward the bound, so
/// the margin covers many chunks.
const TRIM_PER_BUDGET: f64 = 1e-4;
const MAX_TAIL_TRIM: f64 = 1e-12;

/// How a sector line is advanced under the squeezer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Propagator {
    /// Chunked Chebyshev expansion of the exponential.
    #[default]
    Chebyshev,
    /// Disentangled factorization
    /// `exp(τ a†b†) (cosh g)^-(n̂_a+n̂_b+1) exp(-τ* ab)`, `τ = e^{iθ} tanh g`,
    /// with each exponential summed as a ladder series, in substeps small
    /// enough to keep the series well conditioned.
    LadderSeries,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// `S₂(ξ)`.
    Forward,
    /// `S₂(-ξ) = S₂(ξ)†`.
    Inverse,
}

/// Applies `S₂(ξ) = exp(ξ a†b† - ξ* ab)`, `ξ = g e^{iθ}`.
///
/// The squeezer preserves `j - k`, so each sector line evolves on its own
/// under a tridiagonal generator. A rung-dependent phase makes that
/// generator real symmetric, and the exponential is applied in chunks by a
/// Chebyshev expansion. Each chunk pads the line by the expansion degree,
/// so the truncated product equals the untruncated one; amplitude that
/// ends up past the cutoff is dropped and booked as leaked norm.
pub fn apply_two_mode_squeezer<T: Scalar>(
    state: &mut TwoModeStateVector<T>,
    g: T,
    theta: T,
    direction: Direction,
) -> Result<()> {
    apply_two_mode_squeezer_with(state, g, theta, direction, Propagator::default())
}

/// [`apply_two_mode_squeezer`] with an explicit line propagator.
pub fn apply_two_mode_squeezer_with<T: Scalar>(
    state: &mut TwoModeStateVector<T>,
    g: T,
    theta: T,
    direction: Direction,
    propagator: Propagator,
) -> Result<()> {
    if !(g >= T::zero()) || !g.is_finite() {
        return Err(Error::InvalidParameter {
            name: "gain",
            value: g.to_f64_lossy(),
            reason: "must be finite and non-negative",
        });
    }
    if g == T::zero() {
        return Ok(());
    }
    let theta = match direction {
        Direction::Forward => theta,
        Direction::Inverse => theta + T::PI(),
    };
    let cutoff = state.cutoff();
    let budget = state.leak_budget() - state.leaked_norm();
    let error_budget = state.error_budget();
    let trim = if error_budget.is_finite() {
        T::of((error_budget.to_f64_lossy() * TRIM_PER_BUDGET).clamp(TAIL_TRIM, MAX_TAIL_TRIM))
    } else {
        T::of(TAIL_TRIM)
    };
    let peak = state
        .sectors()
        .flat_map(|(_, line)| line.iter())
        .fold(T::zero(), |acc, c| acc.max(c.norm()));
    let trim = trim * peak;
    let mut lost = T::zero();
    // partial sum of the expectation error bound over the sectors done so far
    let mut bound = T::zero();
    let mut work = Workspace::default();
    for (d, line, drift) in state.lines_mut() {
        if line.iter().all(|c| c.norm_sqr() == T::zero()) {
            bound += *drift * *drift;
            continue;
        }
        let r_max = cutoff - d.unsigned_abs();
        let offsets = sector_offsets(d);
        let (mass, norm) = match propagator {
            Propagator::Chebyshev => squeeze_line(line, offsets, r_max, (g, theta), trim, &mut work),
            Propagator::LadderSeries => ladder_line(line, offsets, r_max, (g, theta), trim, &mut work),
        };
        lost += mass;
        *drift += norm;
        bound += T::of(2.0) * line_norm(line).sqrt() * *drift + *drift * *drift;
        if lost > budget || bound > error_budget {
            break;
        }
    }
    state.add_leak(lost)?;
    state.check_error_budget()
}

/// Scratch buffers shared by the chunks of one operation.
struct Workspace<T> {
    coef: Vec<T>,
    scaled: Vec<T>,
    prev: Vec<Complex<T>>,
    cur: Vec<Complex<T>>,
    next: Vec<Complex<T>>,
    acc: Vec<Complex<T>>,
    term: Vec<Complex<T>>,
}

impl<T> Default for Workspace<T> {
    fn default() -> Self {
        Self {
            coef: Vec::new(),
            scaled: Vec::new(),
            prev: Vec::new(),
            cur: Vec::new(),
            next: Vec::new(),
            acc: Vec::new(),
            term: Vec::new(),
        }
    }
}

impl<T: Scalar> Workspace<T> {
    /// Ladder coefficients `√((j+1)(k+1))` from rung `r` to `r+1`, for
    /// every rung below `len`.
    fn ensure_coef(&mut self, len: usize, (a0, b0): (usize, usize)) {
        for r in self.coef.len()..len {
            self.coef
                .push((T::of_usize(r + a0 + 1) * T::of_usize(r + b0 + 1)).sqrt());
        }
    }
}

fn line_norm<T: Scalar>(line: &[Complex<T>]) -> T {
    line.iter().fold(T::zero(), |acc, c| acc + c.norm_sqr())
}

/// `line[r] *= e^{i r α}`.
fn rotate_rungs<T: Scalar>(line: &mut [Complex<T>], alpha: T) {
    for (r, c) in line.iter_mut().enumerate() {
        *c *= Complex::from_polar(T::one(), alpha * T::of_usize(r));
    }
}

/// Chebyshev order and coefficients `J_k(z)` for `k <= order`.
fn chebyshev_coefficients<T: Scalar>(z: T) -> Vec<T> {
    let zf = z.to_f64_lossy();
    let n_est = (zf + 15.0 * zf.cbrt() + 30.0).ceil() as usize;
    let mut j = bessel_j_orders(z, n_est);
    let tol = T::of(CHEBYSHEV_TOLERANCE);
    let order = j.iter().rposition(|v| v.abs() > tol).unwrap_or(0).max(1);
    j.truncate(order + 1);
    j
}

/// Advances one sector line. Returns the probability dropped past `r_max`
/// or trimmed from the tail, and the summed norms of the dropped pieces.
fn squeeze_line<T: Scalar>(
    line: &mut Vec<Complex<T>>,
    offsets: (usize, usize),
    r_max: usize,
    (g, theta): (T, T),
    trim: T,
    work: &mut Workspace<T>,
) -> (T, T) {
    work.coef.clear();
    // y_r = e^{-i r α} x_r turns i(ξ a†b† - ξ* ab) into the real symmetric
    // tridiagonal g·C with C[r+1][r] = C[r][r+1] = coef(r)
    let alpha = theta + T::FRAC_PI_2();
    rotate_rungs(line, -alpha);
    let (mut mass, mut norm) = (T::zero(), T::zero());
    let mut remaining = g;
    while remaining > T::zero() && !line.is_empty() {
        let len = line.len();
        let z_target = T::of((CHUNK_PER_RUNG * len as f64).max(MIN_CHUNK));
        let pad = chebyshev_coefficients(z_target).len();
        work.ensure_coef(len + pad + 1, offsets);
        // Gershgorin bound on the padded matrix
        let lambda = T::of(2.0) * work.coef[len + pad - 1];
        let step = remaining.min(z_target / lambda);
        remaining -= step;
        if remaining < g * T::epsilon() {
            remaining = T::zero();
        }
        let j = chebyshev_coefficients(step * lambda);
        chebyshev_chunk(line, &j, lambda, work);
        if line.len() > r_max + 1 {
            let dropped = line_norm(&line[r_max + 1..]);
            line.truncate(r_max + 1);
            mass += dropped;
            norm += dropped.sqrt();
        }
        let trimmed = trim_tail(line, trim);
        mass += trimmed;
        norm += trimmed.sqrt();
    }
    rotate_rungs(line, alpha);
    (mass, norm)
}

/// `line ← exp(-i s C) line` with `s·λ = z` and `J_k(z)` in `j`.
///
/// Uses `e^{-izx} = J_0(z) + 2 Σ_k (-i)^k J_k(z) T_k(x)` on `x = C/λ`. The
/// line grows by one rung per order.
fn chebyshev_chunk<T: Scalar>(line: &mut Vec<Complex<T>>, j: &[T], lambda: T, work: &mut Workspace<T>) {
    let zero = Complex::new(T::zero(), T::zero());
    let len = line.len();
    let order = j.len() - 1;
    let full = len + order;
    let Workspace {
        coef,
        scaled,
        prev,
        cur,
        next,
        acc,
        ..
    } = work;
    let two_over = T::of(2.0) / lambda;
    scaled.clear();
    scaled.extend(coef[..full].iter().map(|&c| c * two_over));
    for v in [&mut *prev, &mut *cur, &mut *next, &mut *acc] {
        v.clear();
        v.resize(full + 1, zero);
    }
    prev[..len].copy_from_slice(line);
    for r in 0..len {
        acc[r] = prev[r].scale(j[0]);
    }
    // T_1 = C/λ, half of the two-term update below
    let half = T::of(0.5);
    for r in 0..=len.min(full - 1) {
        let below = if r > 0 { prev[r - 1].scale(scaled[r - 1]) } else { zero };
        cur[r] = (below + prev[r + 1].scale(scaled[r])).scale(half);
    }
    let two = T::of(2.0);
    accumulate(acc, cur, two * j[1], 1, len + 1);
    for k in 2..=order {
        let active = (len + k).min(full);
        next[0] = cur[1].scale(scaled[0]) - prev[0];
        for r in 1..active {
            next[r] = cur[r - 1].scale(scaled[r - 1]) + cur[r + 1].scale(scaled[r]) - prev[r];
        }
        accumulate(acc, next, two * j[k], k, active);
        std::mem::swap(prev, cur);
        std::mem::swap(cur, next);
    }
    line.clear();
    line.extend_from_slice(&acc[..full]);
}

/// `acc += c (-i)^k t` over the first `active` rungs.
fn accumulate<T: Scalar>(acc: &mut [Complex<T>], t: &[Complex<T>], c: T, k: usize, active: usize) {
    let pairs = acc[..active].iter_mut().zip(&t[..active]);
    match k % 4 {
        0 => pairs.for_each(|(a, x)| *a += x.scale(c)),
        1 => pairs.for_each(|(a, x)| *a += Complex::new(x.im * c, -x.re * c)),
        2 => pairs.for_each(|(a, x)| *a -= x.scale(c)),
        _ => pairs.for_each(|(a, x)| *a += Complex::new(-x.im * c, x.re * c)),
    }
}

/// Ladder-series counterpart of [`squeeze_line`].
fn ladder_line<T: Scalar>(
    line: &mut Vec<Complex<T>>,
    offsets: (usize, usize),
    r_max: usize,
    (g, theta): (T, T),
    trim: T,
    work: &mut Workspace<T>,
) -> (T, T) {
    work.coef.clear();
    let strength = T::of(SUBSTEP_STRENGTH);
    let (mut mass, mut norm) = (T::zero(), T::zero());
    let mut remaining = g;
    while remaining > T::zero() && !line.is_empty() {
        let top = line.len() + offsets.0.max(offsets.1) + 1;
        let step = remaining.min(strength / T::of_usize(top));
        remaining -= step;
        if remaining < g * T::epsilon() {
            remaining = T::zero();
        }
        let tau = Complex::from_polar(step.tanh(), theta);
        work.ensure_coef(line.len(), offsets);
        lower_series(line, -tau.conj(), work);
        scale_by_cosh(line, offsets, step.cosh());
        raise_series(line, offsets, tau, work);
        if line.len() > r_max + 1 {
            let dropped = line_norm(&line[r_max + 1..]);
            line.truncate(r_max + 1);
            mass += dropped;
            norm += dropped.sqrt();
        }
        let trimmed = trim_tail(line, trim);
        mass += trimmed;
        norm += trimmed.sqrt();
    }
    (mass, norm)
}

fn peak_sqr<T: Scalar>(line: &[Complex<T>]) -> T {
    line.iter().fold(T::zero(), |acc, c| acc.max(c.norm_sqr()))
}

/// `line ← exp(c ab) line`.
fn lower_series<T: Scalar>(line: &mut [Complex<T>], c: Complex<T>, work: &mut Workspace<T>) {
    let tol = T::of(SERIES_TOLERANCE * SERIES_TOLERANCE) * peak_sqr(line);
    let Workspace { coef, term, next, .. } = work;
    term.clear();
    term.extend_from_slice(line);
    let mut p = 0usize;
    while term.len() > 1 {
        p += 1;
        let factor = c / T::of_usize(p);
        next.clear();
        let mut peak = T::zero();
        for r in 0..term.len() - 1 {
            let t = term[r + 1].scale(coef[r]) * factor;
            peak = peak.max(t.norm_sqr());
            line[r] += t;
            next.push(t);
        }
        std::mem::swap(term, next);
        if peak <= tol {
            break;
        }
    }
}

/// `line ← exp(c a†b†) line`. The line grows by one rung per term.
fn raise_series<T: Scalar>(
    line: &mut Vec<Complex<T>>,
    offsets: (usize, usize),
    c: Complex<T>,
    work: &mut Workspace<T>,
) {
    let zero = Complex::new(T::zero(), T::zero());
    let tol = T::of(SERIES_TOLERANCE * SERIES_TOLERANCE) * peak_sqr(line);
    work.term.clear();
    work.term.extend_from_slice(line);
    // term occupies rungs start..start+term.len()
    let mut start = 0usize;
    let mut p = 0usize;
    while !work.term.is_empty() {
        p += 1;
        let factor = c / T::of_usize(p);
        work.ensure_coef(start + work.term.len(), offsets);
        let Workspace { coef, term, next, .. } = &mut *work;
        next.clear();
        let mut peak = T::zero();
        let base = start + 1;
        if line.len() < base + term.len() {
            line.resize(base + term.len(), zero);
        }
        for (i, x) in term.iter().enumerate() {
            let t = x.scale(coef[start + i]) * factor;
            peak = peak.max(t.norm_sqr());
            line[base + i] += t;
            next.push(t);
        }
        std::mem::swap(term, next);
        start = base;
        if peak <= tol {
            break;
        }
    }
}

/// `line ← (cosh g)^-(n̂_a+n̂_b+1) line`.
fn scale_by_cosh<T: Scalar>(line: &mut [Complex<T>], (a0, b0): (usize, usize), cosh: T) {
    let ratio = cosh.powi(-2);
    let mut factor = cosh.powi(-((a0 + b0 + 1) as i32));
    for c in line.iter_mut() {
        *c = c.scale(factor);
        factor *= ratio;
    }
}

/// Drops trailing rungs below `trim` in magnitude and returns their
/// probability. A line that is negligible throughout empties.
fn trim_tail<T: Scalar>(line: &mut Vec<Complex<T>>, trim: T) -> T {
    let floor = trim * trim;
    let mut mass = T::zero();
    while !line.is_empty() {
        match line.last() {
            Some(c) if c.norm_sqr() <= floor => {
                mass += c.norm_sqr();
                line.pop();
            }
            _ => break,
        }
    }
    mass
}

/// `e^{iφ n̂}` on the chosen mode. Norm is preserved exactly.
pub fn apply_phase_shift<T: Scalar>(state: &mut TwoModeStateVector<T>, phi: T, mode: Mode) {
    if phi == T::zero() {
        return;
    }
    for (d, line, _) in state.lines_mut() {
        let (a0, b0) = sector_offsets(d);
        let base = match mode {
            Mode::A => a0,
            Mode::B => b0,
        };
        for (r, c) in line.iter_mut().enumerate() {
            *c *= Complex::from_polar(T::one(), phi * T::of_usize(r + base));
        }
    }
}

impl From<PhaseMode> for Mode {
    fn from(p: PhaseMode) -> Self {
        match p {
            PhaseMode::Lower => Mode::A,
            PhaseMode::Upper => Mode::B,
        }
    }
}

/// First OPA `S₂(g, θ)`, phase shift, then the balanced second OPA `S₂(g, θ+π)`.
pub fn evolve_through_interferometer<T: Scalar>(
    state: &mut TwoModeStateVector<T>,
    config: &InterferometerConfig<T>,
) -> Result<()> {
    apply_two_mode_squeezer(state, config.gain, config.opa_phase, Direction::Forward)?;
    apply_phase_shift(state, config.phase, config.phase_mode.into());
    apply_two_mode_squeezer(state, config.gain, config.opa_phase, Direction::Inverse)
}
