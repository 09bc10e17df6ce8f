use su11_core::closedform::total_mean_photon_number;
use su11_core::{Error, Result};

/// Relative slack on the budget check, so that `N_tot` produced by
/// [`total_mean_photon_number`] maps back to its own `n̄_a`.
const BUDGET_SLACK: f64 = 1e-12;

/// Mode-a mean photon number that fills the budget `N_tot` at gain `g`
/// with `|n⟩` in mode b: `(N_tot - 2 sinh²g) / cosh 2g - n`.
pub fn solve_na_for_budget(n_tot: f64, n: usize, g: f64) -> Result<f64> {
    let floor = total_mean_photon_number(0.0, n, g)?;
    if !n_tot.is_finite() || n_tot < floor * (1.0 - BUDGET_SLACK) {
        return Err(Error::BudgetInfeasible { n_tot, n, gain: g });
    }
    let na = (n_tot - 2.0 * g.sinh().powi(2)) / (2.0 * g).cosh() - n as f64;
    Ok(na.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spontaneous_photons_exhaust_budget() {
        for g in [0.0, 0.3, 1.2f64] {
            let n_tot = 2.0 * g.sinh().powi(2);
            assert_eq!(solve_na_for_budget(n_tot, 0, g).unwrap(), 0.0);
        }
    }

    #[test]
    fn round_trip() {
        let na = solve_na_for_budget(10.0, 1, 0.8).unwrap();
        assert!(na > 0.0);
        let back = total_mean_photon_number(na, 1, 0.8).unwrap();
        assert!((back - 10.0).abs() < 1e-12);
        for &(n_tot, n, g) in &[(5.0, 0, 0.4), (5.0, 2, 0.4), (100.0, 3, 1.0), (15.0, 3, 1.0)] {
            let na = solve_na_for_budget(n_tot, n, g).unwrap();
            let back = total_mean_photon_number(na, n, g).unwrap();
            assert!((back - n_tot).abs() <= 1e-12 * n_tot, "{back} vs {n_tot}");
        }
    }

    #[test]
    fn infeasible_budget() {
        assert!(matches!(
            solve_na_for_budget(3.0, 3, 1.0),
            Err(Error::BudgetInfeasible { n: 3, .. })
        ));
        assert!(solve_na_for_budget(-1.0, 0, 0.0).is_err());
        assert!(solve_na_for_budget(1.0, 0, -0.5).is_err());
    }
}
