use std::f64::consts::PI;

use proptest::prelude::*;
use su11_core::closedform::*;

fn sign(n: usize) -> f64 {
    if n.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn input_strategy() -> impl Strategy<Value = InputSpec<f64>> {
    prop_oneof![
        (0usize..12, 0usize..6).prop_map(|(m, n)| InputSpec::fock(m, n)),
        (0.0f64..6.0, 0usize..6).prop_map(|(a, n)| InputSpec::coherent(a, n).unwrap()),
        (0.0f64..6.0, 0usize..6).prop_map(|(t, n)| InputSpec::thermal(t, n).unwrap()),
        (prop::collection::vec(0.0f64..1.0, 1..8), 0usize..6).prop_map(|(w, n)| {
            let total: f64 = w.iter().sum::<f64>().max(1e-3);
            let mut w: Vec<f64> = w.iter().map(|x| x / total).collect();
            let drift = 1.0 - w.iter().sum::<f64>();
            w[0] = (w[0] + drift).max(0.0);
            InputSpec::diagonal(w, n).unwrap()
        }),
    ]
}

/// `Σ_{k<K} |c_{m,n,k}|²` for increasing `K`, stopping once the terms are
/// past their peak and negligible.
fn coefficient_partial_sums(m: usize, n: usize, g: f64, theta: f64, phi: f64) -> Vec<f64> {
    let mut sums = Vec::new();
    let mut total = 0.0;
    let mut peak = 0.0f64;
    for k in 0..20_000 {
        let p = squeeze_amplitude_cmnk(m, n, k, g, theta, phi).unwrap().norm_sqr();
        total += p;
        sums.push(total);
        peak = peak.max(p);
        if k > m + n && p < 1e-18 * peak.max(1e-300) && p < 1e-20 {
            break;
        }
    }
    sums
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn parity_is_bounded_even_and_periodic(input in input_strategy(), g in 0.0f64..1.5, phi in -2.0 * PI..2.0 * PI) {
        let v = parity_signal(&input, g, phi).unwrap();
        prop_assert!((-1.0 - 1e-12..=1.0 + 1e-12).contains(&v), "{v}");
        let mirrored = parity_signal(&input, g, -phi).unwrap();
        prop_assert!((v - mirrored).abs() < 1e-12);
        let shifted = parity_signal(&input, g, phi + 2.0 * PI).unwrap();
        prop_assert!((v - shifted).abs() < 1e-9, "{v} vs {shifted}");
    }

    #[test]
    fn parity_is_fock_sign_without_phase_or_gain(input in input_strategy(), g in 0.0f64..2.0, phi in -PI..PI) {
        let expect = sign(input.n);
        prop_assert!((parity_signal(&input, g, 0.0).unwrap() - expect).abs() < 1e-12);
        prop_assert!((parity_signal(&input, 0.0, phi).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn stable_and_literal_fock_forms_agree(m in 0usize..10, n in 0usize..10, g in 0.0f64..1.5, phi in -PI..PI) {
        let a = parity_fock_fock_literal(m, n, g, phi).unwrap();
        let b = parity_fock_fock_jacobi(m, n, g, phi).unwrap();
        prop_assert!((a - b).abs() < 1e-10, "{a} vs {b}");
    }

    #[test]
    fn large_photon_numbers_stay_finite(m in 0usize..80, n in 0usize..80, g in 0.0f64..2.5, phi in -PI..PI) {
        let v = parity_fock_fock(m, n, g, phi).unwrap();
        prop_assert!(v.is_finite() && v.abs() <= 1.0 + 1e-9, "{v}");
    }

    #[test]
    fn coherent_and_thermal_are_photon_number_mixtures(mean in 0.0f64..4.0, n in 0usize..4, g in 0.0f64..1.2, phi in -PI..PI) {
        let poisson = DiagonalWeights::poisson(mean, 1e-14).unwrap();
        // the truncated tail is inside the mixture normalization tolerance
        let mixed = parity_diagonal_mixture(poisson.as_slice(), n, g, phi).unwrap();
        prop_assert!((parity_coherent_fock(mean, n, g, phi).unwrap() - mixed).abs() < 1e-8);
        let geometric = DiagonalWeights::geometric(mean, 1e-14).unwrap();
        let mixed = parity_diagonal_mixture(geometric.as_slice(), n, g, phi).unwrap();
        prop_assert!((parity_thermal_fock(mean, n, g, phi).unwrap() - mixed).abs() < 1e-8);
    }

    #[test]
    fn measurement_coefficients_satisfy_cd_identity(g in 0.0f64..2.0, theta in -PI..PI, phi in -PI..PI) {
        let c = mcd_coefficients(g, theta, phi);
        let lhs = c.c * c.d;
        let rhs = c.m.norm_sqr();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1e-300) + 1e-300, "{lhs} vs {rhs}");
    }

    #[test]
    fn coefficient_norm_approaches_one(m in 0usize..=5, n in 0usize..=5, g in 0.0f64..1.2, theta in -PI..PI, phi in -PI..PI) {
        let sums = coefficient_partial_sums(m, n, g, theta, phi);
        for w in sums.windows(2) {
            prop_assert!(w[1] >= w[0]);
        }
        let last = *sums.last().unwrap();
        prop_assert!((1.0 - last).abs() < 1e-10, "deficit {}", 1.0 - last);
    }

    #[test]
    fn mixed_qfi_depends_on_mean_only(mean in 0.0f64..5.0, n in 0usize..5, g in 0.0f64..1.5) {
        let q = qfi_diagonal_mixture(mean, n, g).unwrap();
        let m = mean.floor() as usize;
        let frac = mean - m as f64;
        // two-point mixture with the same mean
        let pair = (1.0 - frac) * qfi_pure_fock(m, n, g).unwrap() + frac * qfi_pure_fock(m + 1, n, g).unwrap();
        prop_assert!((q - pair).abs() <= 1e-10 * q.max(1.0));
    }

    #[test]
    fn fock_photon_helps_while_mode_a_is_richer(g in 0.1f64..1.5, n_tot in 1.0f64..200.0, n in 0usize..4) {
        // move one photon from mode a into mode b at fixed total photon number
        let solve = |k: usize| (n_tot - total_mean_photon_number(0.0, k, g).unwrap()) / (2.0 * g).cosh();
        let (a0, a1) = (solve(n), solve(n + 1));
        prop_assume!(a1 >= 0.0 && (a1 - n as f64).abs() > 1e-6);
        let q0 = qcrb(a0, n, g).unwrap();
        let q1 = qcrb(a1, n + 1, g).unwrap();
        if a1 > n as f64 {
            prop_assert!(q1 < q0, "{q1} !< {q0}");
        } else {
            prop_assert!(q1 > q0, "{q1} !> {q0}");
        }
    }

    #[test]
    fn heisenberg_below_shot_noise(n_tot in 1.0f64..1e6) {
        let (snl, hl) = benchmark_limits(n_tot).unwrap();
        prop_assert!(hl <= snl);
    }

    #[test]
    fn sensitivity_saturates_bound_near_zero_phase(input in input_strategy(), g in 0.2f64..1.2) {
        let bound = qcrb(input.mean_a(), input.n, g).unwrap();
        let s = phase_sensitivity(&input, g, 1e-4).unwrap();
        prop_assert!((s.value / bound - 1.0).abs() < 1e-4, "{} vs {bound}", s.value);
    }
}
