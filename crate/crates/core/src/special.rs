//! Special functions: log-factorials, Laguerre and Jacobi polynomials,
//! integer-order Bessel functions.

use crate::scalar::Scalar;

// n! for n <= 20; every entry is exact in u64.
const FACTORIALS: [u64; 21] = [
    1,
    1,
    2,
    6,
    24,
    120,
    720,
    5040,
    40320,
    362880,
    3628800,
    39916800,
    479001600,
    6227020800,
    87178291200,
    1307674368000,
    20922789888000,
    355687428096000,
    6402373705728000,
    121645100408832000,
    2432902008176640000,
];

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(x)` for real `x` (Lanczos approximation with reflection).
///
/// Relative accuracy is about `1e-15` for `x > 0.5` in `f64`.
pub fn ln_gamma<T: Scalar>(x: T) -> T {
    let half = T::of(0.5);
    if x < half {
        // reflection: Γ(x)Γ(1-x) = π / sin(πx)
        let pi = T::PI();
        return (pi / (pi * x).sin().abs()).ln() - ln_gamma(T::one() - x);
    }
    let x = x - T::one();
    let mut acc = T::of(LANCZOS_COEFFS[0]);
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += T::of(c) / (x + T::of_usize(i));
    }
    let t = x + T::of(LANCZOS_G) + half;
    half * (T::TAU()).ln() + (x + half) * t.ln() - t + acc.ln()
}

/// `ln(n!)`.
///
/// Exact table up to `20!`; Stirling series with four correction terms
/// beyond that, where the truncation error is below `1e-20`.
pub fn ln_factorial<T: Scalar>(n: usize) -> T {
    if n < FACTORIALS.len() {
        return T::of((FACTORIALS[n] as f64).ln());
    }
    let x = T::of_usize(n + 1);
    let inv = x.recip();
    let inv2 = inv * inv;
    let series = inv
        * (T::of(1.0 / 12.0) - inv2 * (T::of(1.0 / 360.0) - inv2 * (T::of(1.0 / 1260.0) - inv2 * T::of(1.0 / 1680.0))));
    (x - T::of(0.5)) * x.ln() - x + T::of(0.5) * T::TAU().ln() + series
}

/// `ln C(n, k)`; `k <= n` required.
pub fn ln_binomial<T: Scalar>(n: usize, k: usize) -> T {
    debug_assert!(k <= n);
    ln_factorial::<T>(n) - ln_factorial::<T>(k) - ln_factorial::<T>(n - k)
}

/// Laguerre polynomial `L_n(x)` via the three-term recurrence
/// `(k+1) L_{k+1} = (2k+1-x) L_k - k L_{k-1}`.
pub fn laguerre<T: Scalar>(n: usize, x: T) -> T {
    let mut prev = T::one();
    if n == 0 {
        return prev;
    }
    let mut cur = T::one() - x;
    for k in 1..n {
        let kf = T::of_usize(k);
        let next = ((T::of_usize(2 * k + 1) - x) * cur - kf * prev) / (kf + T::one());
        prev = cur;
        cur = next;
    }
    cur
}

/// Jacobi polynomial `P_n^{(alpha, beta)}(x)` via the forward recurrence in
/// the degree, stable for `x` in `[-1, 1]` and `alpha, beta >= 0`.
pub fn jacobi<T: Scalar>(n: usize, alpha: T, beta: T, x: T) -> T {
    let one = T::one();
    let two = T::of(2.0);
    let p0 = one;
    if n == 0 {
        return p0;
    }
    let mut prev = p0;
    let mut cur = (alpha + one) + (alpha + beta + two) * (x - one) / two;
    let ab = alpha + beta;
    for k in 2..=n {
        let kf = T::of_usize(k);
        let c = two * kf + ab;
        let a1 = two * kf * (kf + ab) * (c - two);
        let a2 = (c - one) * (c * (c - two) * x + alpha * alpha - beta * beta);
        let a3 = two * (kf + alpha - one) * (kf + beta - one) * c;
        let next = (a2 * cur - a3 * prev) / a1;
        prev = cur;
        cur = next;
    }
    cur
}

/// `J_0(z), …, J_{n_max}(z)` for `z >= 0` by Miller's backward recurrence,
/// normalized with `J_0 + 2 Σ_k J_{2k} = 1`.
///
/// Accurate in relative terms even where `J_k` has decayed far below
/// `J_0`, which is what truncating a Chebyshev expansion needs.
pub fn bessel_j_orders<T: Scalar>(z: T, n_max: usize) -> Vec<T> {
    let mut out = vec![T::zero(); n_max + 1];
    if z == T::zero() {
        out[0] = T::one();
        return out;
    }
    let reach = n_max.max(z.to_f64_lossy().ceil() as usize);
    let mut start = reach + 32 + (40.0 * reach as f64).sqrt() as usize;
    start += start % 2;
    let big = T::of(1e250);
    let (mut hi, mut cur) = (T::zero(), T::of(1e-300));
    let mut norm = T::zero();
    for k in (1..=start).rev() {
        // cur = J_k, hi = J_{k+1}, up to a common factor
        if k <= n_max {
            out[k] = cur;
        }
        if k % 2 == 0 {
            norm += T::of(2.0) * cur;
        }
        let lo = T::of_usize(2 * k) / z * cur - hi;
        hi = cur;
        cur = lo;
        if cur.abs() > big {
            let s = T::one() / big;
            for v in out.iter_mut() {
                *v *= s;
            }
            hi *= s;
            cur *= s;
            norm *= s;
        }
    }
    out[0] = cur;
    norm += cur;
    for v in out.iter_mut() {
        *v /= norm;
    }
    out
}
