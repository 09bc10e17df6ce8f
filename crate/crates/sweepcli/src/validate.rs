//! Closed forms against the Fock-space reference simulator.

use std::collections::BTreeMap;

use num_complex::Complex;
use serde::Serialize;
use su11_core::closedform::{self, squeeze_ket, DiagonalWeights, InterferometerConfig, PhaseMode};
use su11_core::fockoracle::{
    apply_phase_shift, oracle_mean_photons, oracle_parity_sweep, oracle_parity_two_mode_coherent, oracle_qfi_mixture,
    oracle_qfi_pure, squeezed_fock, CutoffPolicy, Mode,
};
use su11_core::InputSpec;
use su11_core::Result as CoreResult;

use crate::config::{InputKind, RunConfig};
use crate::error::Result;

/// The closed forms under test. Every method defaults to the library
/// routine; overriding one substitutes a different implementation, which
/// is how a corrupted formula is checked to be caught.
pub trait ClosedForms {
    fn squeeze_amplitude(
        &self,
        m: usize,
        n: usize,
        k: usize,
        g: f64,
        theta: f64,
        phi: f64,
    ) -> CoreResult<Complex<f64>> {
        closedform::squeeze_amplitude_cmnk(m, n, k, g, theta, phi)
    }

    fn qfi_pure_fock(&self, m: usize, n: usize, g: f64) -> CoreResult<f64> {
        closedform::qfi_pure_fock(m, n, g)
    }

    fn qfi_diagonal_mixture(&self, mean_a: f64, n: usize, g: f64) -> CoreResult<f64> {
        closedform::qfi_diagonal_mixture(mean_a, n, g)
    }

    fn total_mean_photon_number(&self, mean_a: f64, n: usize, g: f64) -> CoreResult<f64> {
        closedform::total_mean_photon_number(mean_a, n, g)
    }

    fn parity_two_mode_coherent(
        &self,
        alpha: Complex<f64>,
        beta: Complex<f64>,
        g: f64,
        theta: f64,
        phi: f64,
    ) -> CoreResult<f64> {
        closedform::parity_two_mode_coherent(alpha, beta, g, theta, phi)
    }

    fn parity_fock_fock(&self, m: usize, n: usize, g: f64, phi: f64) -> CoreResult<f64> {
        closedform::parity_fock_fock(m, n, g, phi)
    }

    fn parity_diagonal_mixture(&self, weights: &[f64], n: usize, g: f64, phi: f64) -> CoreResult<f64> {
        closedform::parity_diagonal_mixture(weights, n, g, phi)
    }

    fn parity_small_phase_expansion(&self, mean_a: f64, n: usize, g: f64, phi: f64) -> CoreResult<f64> {
        closedform::parity_small_phase_expansion(mean_a, n, g, phi)
    }

    fn parity_coherent_fock(&self, mean: f64, n: usize, g: f64, phi: f64) -> CoreResult<f64> {
        closedform::parity_coherent_fock(mean, n, g, phi)
    }

    fn parity_thermal_fock(&self, mean: f64, n: usize, g: f64, phi: f64) -> CoreResult<f64> {
        closedform::parity_thermal_fock(mean, n, g, phi)
    }
}

/// The closed forms as implemented in `su11_core`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Library;

impl ClosedForms for Library {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ToleranceKind {
    Abs,
    Rel,
}

/// Outcome for one closed form.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquationReport {
    pub max_abs_err: f64,
    pub max_rel_err: f64,
    /// Parameters of the point with the largest judged error.
    pub worst_params: BTreeMap<String, f64>,
    pub pass: bool,
    pub tolerance: f64,
    pub tolerance_kind: ToleranceKind,
    pub points: usize,
}

/// Closed-form name to outcome, in name order.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct ValidationReport {
    pub equations: BTreeMap<String, EquationReport>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.equations.values().all(|e| e.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &str> {
        self.equations.iter().filter(|(_, e)| !e.pass).map(|(k, _)| k.as_str())
    }
}

pub const AMPLITUDE_TOLERANCE: f64 = 1e-10;
pub const PURE_QFI_TOLERANCE: f64 = 1e-8;
pub const MIXTURE_QFI_TOLERANCE: f64 = 1e-6;
pub const PHOTON_NUMBER_TOLERANCE: f64 = 1e-9;
pub const PARITY_TOLERANCE: f64 = 1e-8;

/// Phases at which the second-order expansion is compared. Its remainder
/// is `O(φ⁴)`, far below the parity tolerance here on the default grid.
pub const SMALL_PHASES: [f64; 2] = [-5e-5, 1e-4];

/// Default mixtures for the explicit-weights check.
const DEFAULT_WEIGHTS: [&[f64]; 2] = [&[0.5, 0.3, 0.2], &[0.1, 0.2, 0.3, 0.4]];

/// Squeezed-state amplitudes are compared until the closed-form norm is
/// this close to one.
const AMPLITUDE_NORM_TARGET: f64 = 1e-13;
const MAX_AMPLITUDE_RUNGS: usize = 4000;

/// Phases of `α` and `β` in the two-mode coherent check.
const ALPHA_PHASE: f64 = 0.4;
const BETA_PHASE: f64 = -0.9;

struct Tally {
    kind: ToleranceKind,
    tolerance: f64,
    max_abs: f64,
    max_rel: f64,
    worst: f64,
    worst_params: BTreeMap<String, f64>,
    points: usize,
}

impl Tally {
    fn new(kind: ToleranceKind, tolerance: f64) -> Self {
        Self {
            kind,
            tolerance,
            max_abs: 0.0,
            max_rel: 0.0,
            worst: -1.0,
            worst_params: BTreeMap::new(),
            points: 0,
        }
    }

    fn record(&mut self, abs: f64, scale: f64, params: &[(&str, f64)]) {
        // a NaN error must never pass
        let abs = if abs.is_nan() { f64::INFINITY } else { abs };
        let rel = if abs == 0.0 { 0.0 } else { abs / scale };
        self.points += 1;
        self.max_abs = self.max_abs.max(abs);
        self.max_rel = self.max_rel.max(rel);
        let judged = match self.kind {
            ToleranceKind::Abs => abs,
            ToleranceKind::Rel => rel,
        };
        if judged > self.worst {
            self.worst = judged;
            self.worst_params = params.iter().map(|&(k, v)| (k.to_string(), v)).collect();
        }
    }

    fn real(&mut self, closed: f64, oracle: f64, params: &[(&str, f64)]) {
        self.record((closed - oracle).abs(), oracle.abs(), params);
    }

    fn finish(self) -> Option<EquationReport> {
        (self.points > 0).then_some(EquationReport {
            max_abs_err: self.max_abs,
            max_rel_err: self.max_rel,
            pass: self.worst <= self.tolerance,
            worst_params: self.worst_params,
            tolerance: self.tolerance,
            tolerance_kind: self.kind,
            points: self.points,
        })
    }
}

fn f(x: usize) -> f64 {
    x as f64
}

struct Context<'a> {
    config: &'a RunConfig,
    policy: CutoffPolicy,
    phases: Vec<f64>,
}

impl Context<'_> {
    fn wants(&self, kind: InputKind) -> bool {
        self.config.inputs.contains(&kind)
    }

    /// Mode-a inputs with a mean photon number, tagged for the report.
    fn mean_inputs(&self, n: usize) -> Result<Vec<(&'static str, f64, InputSpec)>> {
        let mut out = Vec::new();
        if self.wants(InputKind::Fock) {
            for &m in &self.config.fock_numbers {
                out.push(("fock_m", f(m), InputSpec::fock(m, n)));
            }
        }
        if self.wants(InputKind::Coherent) {
            for &mean in &self.config.mean_a {
                out.push(("coherent_mean", mean, InputSpec::coherent(mean, n)?));
            }
        }
        if self.wants(InputKind::Thermal) {
            for &mean in &self.config.mean_a {
                out.push(("thermal_mean", mean, InputSpec::thermal(mean, n)?));
            }
        }
        Ok(out)
    }

    fn sweep(&self, input: &InputSpec, g: f64, phases: &[f64]) -> Result<Vec<f64>> {
        let out = oracle_parity_sweep(input, (g, self.config.theta), phases, PhaseMode::Lower, &self.policy)?;
        Ok(out.into_iter().map(|v| v.value).collect())
    }
}

/// Runs every check with the library closed forms.
pub fn run_validate(config: &RunConfig) -> Result<ValidationReport> {
    run_validate_with(config, &Library)
}

/// Runs every check against `forms`. Deterministic: the grid comes from
/// `config` and the report is keyed by closed-form name.
pub fn run_validate_with(config: &RunConfig, forms: &dyn ClosedForms) -> Result<ValidationReport> {
    config.validate()?;
    let ctx = Context {
        config,
        policy: config.policy(),
        phases: config.phi.points(),
    };
    let theta = config.theta;
    let mut equations = BTreeMap::new();
    let mut put = |name: &str, tally: Tally| {
        if let Some(r) = tally.finish() {
            equations.insert(name.to_string(), r);
        }
    };

    let fock = ctx.wants(InputKind::Fock);
    let mut amplitude = Tally::new(ToleranceKind::Abs, AMPLITUDE_TOLERANCE);
    let mut pure_qfi = Tally::new(ToleranceKind::Rel, PURE_QFI_TOLERANCE);
    let mut fock_parity = Tally::new(ToleranceKind::Abs, PARITY_TOLERANCE);
    for &g in &config.gains {
        for &m in config.fock_numbers.iter().filter(|_| fock) {
            for &n in &config.fock_numbers {
                let run = squeezed_fock(m, n, g, theta, &ctx.policy)?;
                for &phi in &ctx.phases {
                    let mut state = run.state.clone();
                    apply_phase_shift(&mut state, phi, Mode::A);
                    let mut norm = 0.0;
                    for k in 0..MAX_AMPLITUDE_RUNGS {
                        let c = forms.squeeze_amplitude(m, n, k, g, theta, phi)?;
                        let (j, kk) = squeeze_ket(m, n, k);
                        let o = state.amplitude(j, kk);
                        let params = [
                            ("m", f(m)),
                            ("n", f(n)),
                            ("k", f(k)),
                            ("g", g),
                            ("theta", theta),
                            ("phi", phi),
                        ];
                        amplitude.record((c - o).norm(), o.norm(), &params);
                        norm += c.norm_sqr();
                        if (1.0 - norm).abs() < AMPLITUDE_NORM_TARGET {
                            break;
                        }
                    }
                }
                let oracle = oracle_qfi_pure(m, n, g, theta, &ctx.policy)?;
                pure_qfi.real(
                    forms.qfi_pure_fock(m, n, g)?,
                    oracle,
                    &[("m", f(m)), ("n", f(n)), ("g", g)],
                );

                let oracle = ctx.sweep(&InputSpec::fock(m, n), g, &ctx.phases)?;
                for (&phi, &o) in ctx.phases.iter().zip(&oracle) {
                    let c = forms.parity_fock_fock(m, n, g, phi)?;
                    fock_parity.real(c, o, &[("m", f(m)), ("n", f(n)), ("g", g), ("phi", phi)]);
                }
            }
        }
    }
    put("squeeze_amplitude_cmnk", amplitude);
    put("qfi_pure_fock", pure_qfi);
    put("parity_fock_fock", fock_parity);

    let mut mixture_qfi = Tally::new(ToleranceKind::Rel, MIXTURE_QFI_TOLERANCE);
    let mut photons = Tally::new(ToleranceKind::Rel, PHOTON_NUMBER_TOLERANCE);
    let mut small = Tally::new(ToleranceKind::Abs, PARITY_TOLERANCE);
    let mut coherent = Tally::new(ToleranceKind::Abs, PARITY_TOLERANCE);
    let mut thermal = Tally::new(ToleranceKind::Abs, PARITY_TOLERANCE);
    for &g in &config.gains {
        for &n in &config.fock_numbers {
            for &mean in &config.mean_a {
                let families = [
                    (InputKind::Coherent, "coherent_mean"),
                    (InputKind::Thermal, "thermal_mean"),
                ];
                for (kind, tag) in families.into_iter().filter(|(k, _)| ctx.wants(*k)) {
                    let weights = match kind {
                        InputKind::Coherent => DiagonalWeights::poisson(mean, config.tail_tol)?,
                        _ => DiagonalWeights::geometric(mean, config.tail_tol)?,
                    };
                    let oracle = oracle_qfi_mixture(weights.as_slice(), n, g, &ctx.policy)?;
                    let c = forms.qfi_diagonal_mixture(mean, n, g)?;
                    mixture_qfi.real(c, oracle, &[(tag, mean), ("n", f(n)), ("g", g)]);
                }
            }
            for (tag, mean, input) in ctx.mean_inputs(n)? {
                let (a, b) = oracle_mean_photons(&input, g, theta, &ctx.policy)?;
                let c = forms.total_mean_photon_number(mean, n, g)?;
                photons.real(c, a + b, &[(tag, mean), ("n", f(n)), ("g", g), ("theta", theta)]);

                let oracle = ctx.sweep(&input, g, &SMALL_PHASES)?;
                for (&phi, &o) in SMALL_PHASES.iter().zip(&oracle) {
                    let c = forms.parity_small_phase_expansion(mean, n, g, phi)?;
                    small.real(c, o, &[(tag, mean), ("n", f(n)), ("g", g), ("phi", phi)]);
                }

                let tally = match tag {
                    "coherent_mean" => &mut coherent,
                    "thermal_mean" => &mut thermal,
                    _ => continue,
                };
                let oracle = ctx.sweep(&input, g, &ctx.phases)?;
                for (&phi, &o) in ctx.phases.iter().zip(&oracle) {
                    let c = if tag == "coherent_mean" {
                        forms.parity_coherent_fock(mean, n, g, phi)?
                    } else {
                        forms.parity_thermal_fock(mean, n, g, phi)?
                    };
                    tally.real(c, o, &[(tag, mean), ("n", f(n)), ("g", g), ("phi", phi)]);
                }
            }
        }
    }
    put("qfi_diagonal_mixture", mixture_qfi);
    put("total_mean_photon_number", photons);
    put("parity_small_phase_expansion", small);
    put("parity_coherent_fock", coherent);
    put("parity_thermal_fock", thermal);

    let mut two_mode = Tally::new(ToleranceKind::Abs, PARITY_TOLERANCE);
    if ctx.wants(InputKind::Coherent) {
        for &g in &config.gains {
            for &mean_a in &config.mean_a {
                for &mean_b in &config.mean_a {
                    let alpha = Complex::from_polar(mean_a.sqrt(), ALPHA_PHASE);
                    let beta = Complex::from_polar(mean_b.sqrt(), BETA_PHASE);
                    for &phi in &ctx.phases {
                        let setup = InterferometerConfig::lower(g, theta, phi)?;
                        let o = oracle_parity_two_mode_coherent(alpha, beta, &setup, &ctx.policy)?.value;
                        let c = forms.parity_two_mode_coherent(alpha, beta, g, theta, phi)?;
                        let params = [
                            ("alpha_mean", mean_a),
                            ("beta_mean", mean_b),
                            ("g", g),
                            ("theta", theta),
                            ("phi", phi),
                        ];
                        two_mode.real(c, o, &params);
                    }
                }
            }
        }
    }
    put("parity_two_mode_coherent", two_mode);

    let mut mixture = Tally::new(ToleranceKind::Abs, PARITY_TOLERANCE);
    if ctx.wants(InputKind::Diag) {
        let tables: Vec<&[f64]> = match &config.weights {
            Some(w) => vec![w.as_slice()],
            None => DEFAULT_WEIGHTS.to_vec(),
        };
        for (index, weights) in tables.into_iter().enumerate() {
            for &g in &config.gains {
                for &n in &config.fock_numbers {
                    let input = InputSpec::diagonal(weights.to_vec(), n)?;
                    let oracle = ctx.sweep(&input, g, &ctx.phases)?;
                    for (&phi, &o) in ctx.phases.iter().zip(&oracle) {
                        let c = forms.parity_diagonal_mixture(weights, n, g, phi)?;
                        mixture.real(c, o, &[("weights", f(index)), ("n", f(n)), ("g", g), ("phi", phi)]);
                    }
                }
            }
        }
    }
    put("parity_diagonal_mixture", mixture);

    Ok(ValidationReport { equations })
}
