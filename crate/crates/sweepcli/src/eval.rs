//! Single-point evaluation of a closed form by name.

use num_complex::Complex;
use su11_core::closedform;
use su11_core::InputSpec;

use crate::budget::solve_na_for_budget;
use crate::config::InputKind;
use crate::error::{config_error, Result};

/// Arguments of a single evaluation. Operations read only the fields they
/// need and fail on missing ones.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EvalArgs {
    pub g: Option<f64>,
    pub theta: Option<f64>,
    pub phi: Option<f64>,
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub l: Option<usize>,
    pub na: Option<f64>,
    pub n_tot: Option<f64>,
    /// `|β|²` of the mode-b coherent state in the two-mode coherent signal.
    pub beta_mean: Option<f64>,
    pub alpha_phase: Option<f64>,
    pub beta_phase: Option<f64>,
    pub input: Option<InputKind>,
    pub weights: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EvalValue {
    Real(f64),
    Count(usize),
    Flag(bool),
}

/// Named outputs in a fixed order.
pub type EvalOutput = Vec<(&'static str, EvalValue)>;

pub const OPERATIONS: [&str; 22] = [
    "benchmark_limits",
    "fock_parity_kernel",
    "mcd_coefficients",
    "parity_coherent_fock",
    "parity_diagonal_mixture",
    "parity_fock_fock",
    "parity_fock_fock_jacobi",
    "parity_fock_fock_literal",
    "parity_signal",
    "parity_small_phase_expansion",
    "parity_thermal_fock",
    "parity_two_mode_coherent",
    "phase_sensitivity",
    "qcrb",
    "qfi_diagonal_mixture",
    "qfi_pure_fock",
    "solve_na_for_budget",
    "squeeze_amplitude_cmnk",
    "squeeze_coefficient_literal",
    "squeeze_ket",
    "squeeze_term",
    "total_mean_photon_number",
];

fn need<T: Copy>(value: Option<T>, flag: &str, op: &str) -> Result<T> {
    value.ok_or_else(|| config_error(format!("{op} needs {flag}")))
}

fn complex(value: Complex<f64>) -> EvalOutput {
    vec![("re", EvalValue::Real(value.re)), ("im", EvalValue::Real(value.im))]
}

fn real(value: f64) -> EvalOutput {
    vec![("value", EvalValue::Real(value))]
}

impl EvalArgs {
    fn input(&self, op: &str) -> Result<InputSpec> {
        let n = need(self.n, "--n", op)?;
        match need(self.input, "--input", op)? {
            InputKind::Fock => Ok(InputSpec::fock(need(self.m, "--m", op)?, n)),
            InputKind::Coherent => Ok(InputSpec::coherent(need(self.na, "--na", op)?, n)?),
            InputKind::Thermal => Ok(InputSpec::thermal(need(self.na, "--na", op)?, n)?),
            InputKind::Diag => {
                let w = self
                    .weights
                    .clone()
                    .ok_or_else(|| config_error(format!("{op} needs --weights")))?;
                Ok(InputSpec::diagonal(w, n)?)
            }
        }
    }
}

/// Evaluates the closed form called `op`.
pub fn evaluate(op: &str, a: &EvalArgs) -> Result<EvalOutput> {
    let g = || need(a.g, "--g", op);
    let theta = || need(a.theta, "--theta", op);
    let phi = || need(a.phi, "--phi", op);
    let m = || need(a.m, "--m", op);
    let n = || need(a.n, "--n", op);
    let k = || need(a.k, "--k", op);
    let na = || need(a.na, "--na", op);
    let out = match op {
        "benchmark_limits" => {
            let (snl, hl) = closedform::benchmark_limits(need(a.n_tot, "--ntot", op)?)?;
            vec![("snl", EvalValue::Real(snl)), ("hl", EvalValue::Real(hl))]
        }
        "fock_parity_kernel" => real(closedform::fock_parity_kernel(g()?, phi()?)),
        "mcd_coefficients" => {
            let c = closedform::mcd_coefficients(g()?, theta()?, phi()?);
            vec![
                ("m_re", EvalValue::Real(c.m.re)),
                ("m_im", EvalValue::Real(c.m.im)),
                ("c", EvalValue::Real(c.c)),
                ("d", EvalValue::Real(c.d)),
                ("s", EvalValue::Real(c.s)),
            ]
        }
        "parity_coherent_fock" => real(closedform::parity_coherent_fock(na()?, n()?, g()?, phi()?)?),
        "parity_diagonal_mixture" => {
            let w = a
                .weights
                .as_deref()
                .ok_or_else(|| config_error(format!("{op} needs --weights")))?;
            real(closedform::parity_diagonal_mixture(w, n()?, g()?, phi()?)?)
        }
        "parity_fock_fock" => real(closedform::parity_fock_fock(m()?, n()?, g()?, phi()?)?),
        "parity_fock_fock_jacobi" => real(closedform::parity_fock_fock_jacobi(m()?, n()?, g()?, phi()?)?),
        "parity_fock_fock_literal" => real(closedform::parity_fock_fock_literal(m()?, n()?, g()?, phi()?)?),
        "parity_signal" => real(closedform::parity_signal(&a.input(op)?, g()?, phi()?)?),
        "parity_small_phase_expansion" => real(closedform::parity_small_phase_expansion(na()?, n()?, g()?, phi()?)?),
        "parity_thermal_fock" => real(closedform::parity_thermal_fock(na()?, n()?, g()?, phi()?)?),
        "parity_two_mode_coherent" => {
            let alpha = Complex::from_polar(na()?.sqrt(), a.alpha_phase.unwrap_or(0.0));
            let beta = Complex::from_polar(
                need(a.beta_mean, "--beta-mean", op)?.sqrt(),
                a.beta_phase.unwrap_or(0.0),
            );
            real(closedform::parity_two_mode_coherent(
                alpha,
                beta,
                g()?,
                theta()?,
                phi()?,
            )?)
        }
        "phase_sensitivity" => {
            let s = closedform::phase_sensitivity(&a.input(op)?, g()?, phi()?)?;
            vec![
                ("value", EvalValue::Real(s.value)),
                ("at_limit", EvalValue::Flag(s.at_limit)),
                ("phi_eval", EvalValue::Real(s.phi_eval)),
            ]
        }
        "qcrb" => real(closedform::qcrb(na()?, n()?, g()?)?),
        "qfi_diagonal_mixture" => real(closedform::qfi_diagonal_mixture(na()?, n()?, g()?)?),
        "qfi_pure_fock" => real(closedform::qfi_pure_fock(m()?, n()?, g()?)?),
        "solve_na_for_budget" => real(solve_na_for_budget(need(a.n_tot, "--ntot", op)?, n()?, g()?)?),
        "squeeze_amplitude_cmnk" => complex(closedform::squeeze_amplitude_cmnk(
            m()?,
            n()?,
            k()?,
            g()?,
            theta()?,
            phi()?,
        )?),
        "squeeze_coefficient_literal" => complex(closedform::squeeze_coefficient_literal(
            m()?,
            n()?,
            k()?,
            g()?,
            theta()?,
            phi()?,
        )),
        "squeeze_ket" => {
            let (j, kk) = closedform::squeeze_ket(m()?, n()?, k()?);
            vec![("j", EvalValue::Count(j)), ("k", EvalValue::Count(kk))]
        }
        "squeeze_term" => complex(closedform::squeeze_term(
            m()?,
            n()?,
            k()?,
            need(a.l, "--l", op)?,
            g()?,
            theta()?,
            phi()?,
        )),
        "total_mean_photon_number" => real(closedform::total_mean_photon_number(na()?, n()?, g()?)?),
        _ => {
            return Err(config_error(format!(
                "unknown operation `{op}`; expected one of {}",
                OPERATIONS.join(", ")
            )))
        }
    };
    Ok(out)
}
