//! Figure tables at a matched total photon number.

use su11_core::closedform::{
    benchmark_limits, parity_signal, phase_sensitivity, qfi_diagonal_mixture, total_mean_photon_number,
};
use su11_core::{Error, InputSpec};

use crate::budget::solve_na_for_budget;
use crate::config::{InputKind, RunConfig};
use crate::error::{config_error, Result};
use crate::row::{RowStatus, SweepRow};

/// Fig2 rows describe any phase-averaged mode-a state: the bound depends
/// on it only through `n̄_a`.
const FIG2_INPUT: &str = "diag";

/// Largest distance from an integer at which a matched `n̄_a` still counts
/// as a Fock number.
const FOCK_MATCH: f64 = 1e-9;

/// Bound columns `(qfi, qcrb, snl, hl)` and status for one budget point.
fn bound_columns(na: f64, n: usize, g: f64, n_tot: f64) -> Result<(RowStatus, [Option<f64>; 4])> {
    let qfi = qfi_diagonal_mixture(na, n, g)?;
    let (snl, hl) = match benchmark_limits(n_tot) {
        Ok((s, h)) => (Some(s), Some(h)),
        Err(_) => (None, None),
    };
    if qfi > 0.0 {
        Ok((RowStatus::Ok, [Some(qfi), Some(qfi.sqrt().recip()), snl, hl]))
    } else {
        Ok((RowStatus::NoInformation, [Some(qfi), None, snl, hl]))
    }
}

fn fig2_row(series: &'static str, g: f64, theta: f64, n: usize, na: Option<f64>, n_tot: f64) -> Result<SweepRow> {
    let mut row = SweepRow {
        g,
        theta,
        phi: None,
        n,
        na,
        input_kind: FIG2_INPUT,
        n_tot,
        qfi: None,
        qcrb: None,
        snl: None,
        hl: None,
        parity: None,
        sensitivity: None,
        series,
        status: RowStatus::Infeasible,
    };
    if let Some(na) = na {
        let (status, [qfi, qcrb, snl, hl]) = bound_columns(na, n, g, n_tot)?;
        row.status = status;
        row.qfi = qfi;
        row.qcrb = qcrb;
        row.snl = snl;
        row.hl = hl;
    }
    Ok(row)
}

/// QCRB, SNL and HL against `N_tot`.
///
/// Panel (a) holds `(g, n)` fixed per series and moves `n̄_a` along the
/// `n_tot` grid; budgets too small for the series come out as
/// `infeasible` rows. Panel (b) holds `(n̄_a, n)` fixed and moves `g` along
/// `gain_sweep`. Rows are ordered panel, series, then axis index.
pub fn run_fig2(config: &RunConfig) -> Result<Vec<SweepRow>> {
    config.validate()?;
    let mut rows = Vec::new();
    for &g in &config.gains {
        for &n in &config.fock_numbers {
            for &n_tot in &config.n_tot {
                let na = match solve_na_for_budget(n_tot, n, g) {
                    Ok(na) => Some(na),
                    Err(Error::BudgetInfeasible { .. }) => None,
                    Err(e) => return Err(e.into()),
                };
                rows.push(fig2_row("a", g, config.theta, n, na, n_tot)?);
            }
        }
    }
    for &na in &config.mean_a {
        for &n in &config.fock_numbers {
            for &g in &config.gain_sweep {
                let n_tot = total_mean_photon_number(na, n, g)?;
                rows.push(fig2_row("b", g, config.theta, n, Some(na), n_tot)?);
            }
        }
    }
    Ok(rows)
}

/// Input of the given kind whose mean photon number is `na`.
fn matched_input(kind: InputKind, na: f64, n: usize) -> Result<InputSpec> {
    match kind {
        InputKind::Coherent => Ok(InputSpec::coherent(na, n)?),
        InputKind::Thermal => Ok(InputSpec::thermal(na, n)?),
        InputKind::Fock => {
            let m = na.round();
            if (na - m).abs() > FOCK_MATCH {
                return Err(config_error(format!(
                    "budget gives n̄_a = {na}, which is not a Fock number"
                )));
            }
            Ok(InputSpec::fock(m as usize, n))
        }
        InputKind::Diag => Err(config_error(
            "diag inputs have a fixed mean and cannot be matched to a photon budget",
        )),
    }
}

fn phase_rows(config: &RunConfig, with_sensitivity: bool) -> Result<Vec<SweepRow>> {
    config.validate()?;
    let phases = config.phi.points();
    let mut rows = Vec::new();
    for &g in &config.gains {
        for &n_tot in &config.n_tot {
            for &n in &config.fock_numbers {
                let na = solve_na_for_budget(n_tot, n, g)?;
                let (base_status, [qfi, qcrb, snl, hl]) = bound_columns(na, n, g, n_tot)?;
                for &kind in &config.inputs {
                    let input = matched_input(kind, na, n)?;
                    for &phi in &phases {
                        let parity = parity_signal(&input, g, phi)?;
                        let (status, sensitivity) = if !with_sensitivity {
                            (base_status, None)
                        } else {
                            match phase_sensitivity(&input, g, phi) {
                                Ok(s) if s.at_limit => (RowStatus::Limit, Some(s.value)),
                                Ok(s) => (base_status, Some(s.value)),
                                Err(Error::ZeroSlope { .. }) => (RowStatus::ZeroSlope, None),
                                Err(e) => return Err(e.into()),
                            }
                        };
                        rows.push(SweepRow {
                            g,
                            theta: config.theta,
                            phi: Some(phi),
                            n,
                            na: Some(na),
                            input_kind: kind.as_str(),
                            n_tot,
                            qfi,
                            qcrb,
                            snl,
                            hl,
                            parity: Some(parity),
                            sensitivity,
                            series: "",
                            status,
                        });
                    }
                }
            }
        }
    }
    Ok(rows)
}

/// Parity against `φ` for each `(g, N_tot, n, input)` series, with `n̄_a`
/// matched to the budget. Sensitivity is left null.
pub fn run_fig3(config: &RunConfig) -> Result<Vec<SweepRow>> {
    phase_rows(config, false)
}

/// As [`run_fig3`], plus the error-propagation sensitivity. Points with a
/// vanishing slope get a null sensitivity and `zero_slope` status.
pub fn run_fig4(config: &RunConfig) -> Result<Vec<SweepRow>> {
    phase_rows(config, true)
}
