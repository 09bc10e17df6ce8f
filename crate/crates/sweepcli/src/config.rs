//! Run configuration and the per-command default grids.

use std::f64::consts::FRAC_PI_2;
use std::path::PathBuf;

use serde::Serialize;

use crate::error::{config_error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Fig2,
    Fig3,
    Fig4,
    Validate,
    Eval,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

/// Mode-a state family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum InputKind {
    Fock,
    Coherent,
    Thermal,
    Diag,
}

impl InputKind {
    pub fn as_str(self) -> &'static str {
        match self {
            InputKind::Fock => "fock",
            InputKind::Coherent => "coherent",
            InputKind::Thermal => "thermal",
            InputKind::Diag => "diag",
        }
    }
}

/// `steps` evenly spaced phases from `min` to `max` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiGrid {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl PhiGrid {
    /// Point `i` is `(min (N-i) + max i) / N`, so a grid symmetric about
    /// zero is exactly antisymmetric under `i ↦ N-i`.
    pub fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                let i = i as f64;
                (self.min * (last - i) + self.max * i) / last
            })
            .collect()
    }
}

/// Everything a command needs. Start from [`RunConfig::new`], which fills
/// in the command's defaults, then override fields.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    /// Series gains for fig2 panel (a), the gain for fig3/fig4, the gain
    /// grid for validate.
    pub gains: Vec<f64>,
    /// Gain axis of fig2 panel (b).
    pub gain_sweep: Vec<f64>,
    pub theta: f64,
    /// Mode-b Fock numbers. Validate also uses them as mode-a Fock numbers.
    pub fock_numbers: Vec<usize>,
    /// Mode-a mean photon numbers: fig2 panel (b) series, validate's
    /// coherent and thermal means.
    pub mean_a: Vec<f64>,
    /// Total photon budgets: fig2 panel (a) axis, fig3/fig4 series.
    pub n_tot: Vec<f64>,
    pub phi: PhiGrid,
    pub inputs: Vec<InputKind>,
    /// Explicit photon-number distribution for `diag` inputs.
    pub weights: Option<Vec<f64>>,
    /// Leak budget of the reference simulator. Its expectation error
    /// tolerance is a tenth of this.
    pub cutoff_budget: f64,
    pub tail_tol: f64,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
}

/// Largest accepted tolerance.
pub const MAX_TOLERANCE: f64 = 1e-3;

pub fn linspace(start: f64, stop: f64, count: usize) -> Vec<f64> {
    PhiGrid {
        min: start,
        max: stop,
        steps: count,
    }
    .points()
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        let mut config = Self {
            command,
            gains: vec![1.0],
            gain_sweep: linspace(0.1, 1.5, 141),
            theta: 0.0,
            fock_numbers: vec![0, 1, 2, 3],
            mean_a: vec![1.0],
            n_tot: (15..=100).map(f64::from).collect(),
            phi: PhiGrid {
                min: -FRAC_PI_2,
                max: FRAC_PI_2,
                steps: 1001,
            },
            inputs: vec![InputKind::Coherent, InputKind::Thermal],
            weights: None,
            cutoff_budget: su11_core::fockoracle::DEFAULT_LEAK_BUDGET,
            tail_tol: su11_core::fockoracle::DEFAULT_TAIL_TOL,
            format: OutputFormat::Csv,
            out: None,
        };
        match command {
            Command::Fig2 | Command::Eval => {}
            Command::Fig3 | Command::Fig4 => {
                config.gains = vec![0.4];
                config.fock_numbers = vec![0, 1, 2];
                config.n_tot = vec![5.0, 10.0];
            }
            Command::Validate => {
                config.gains = vec![0.3, 0.8];
                config.theta = 0.7;
                config.fock_numbers = vec![0, 1, 2, 3];
                config.mean_a = vec![0.5, 1.5];
                config.phi = PhiGrid {
                    min: 0.0,
                    max: std::f64::consts::PI,
                    steps: 5,
                };
                config.inputs = vec![
                    InputKind::Fock,
                    InputKind::Coherent,
                    InputKind::Thermal,
                    InputKind::Diag,
                ];
            }
        }
        config
    }

    /// Checks grids and tolerances.
    pub fn validate(&self) -> Result<()> {
        let nonempty = |name: &str, len: usize| {
            if len == 0 {
                Err(config_error(format!("{name} grid is empty")))
            } else {
                Ok(())
            }
        };
        nonempty("--g", self.gains.len())?;
        nonempty("gain sweep", self.gain_sweep.len())?;
        nonempty("--n", self.fock_numbers.len())?;
        nonempty("--na", self.mean_a.len())?;
        nonempty("--ntot", self.n_tot.len())?;
        nonempty("--input", self.inputs.len())?;
        if self.phi.steps == 0 {
            return Err(config_error("--phi-steps must be at least 1"));
        }
        for (name, x) in [
            ("--phi-min", self.phi.min),
            ("--phi-max", self.phi.max),
            ("--theta", self.theta),
        ] {
            if !x.is_finite() {
                return Err(config_error(format!("{name} must be finite")));
            }
        }
        for &g in self.gains.iter().chain(&self.gain_sweep) {
            if !(g >= 0.0 && g.is_finite()) {
                return Err(config_error(format!("gain {g} must be finite and non-negative")));
            }
        }
        for &x in self.mean_a.iter().chain(&self.n_tot) {
            if !(x >= 0.0 && x.is_finite()) {
                return Err(config_error(format!(
                    "photon number {x} must be finite and non-negative"
                )));
            }
        }
        for (name, tol) in [("--cutoff-budget", self.cutoff_budget), ("--tail-tol", self.tail_tol)] {
            if !(tol > 0.0 && tol <= MAX_TOLERANCE) {
                return Err(config_error(format!("{name} = {tol} must lie in (0, {MAX_TOLERANCE}]")));
            }
        }
        if let Some(w) = &self.weights {
            su11_core::closedform::DiagonalWeights::new(w.clone(), su11_core::closedform::DIAGONAL_NORM_TOLERANCE)?;
        }
        Ok(())
    }

    /// Reference-simulator policy implied by the budgets.
    pub fn policy(&self) -> su11_core::fockoracle::CutoffPolicy {
        su11_core::fockoracle::CutoffPolicy {
            leak_budget: self.cutoff_budget,
            error_tolerance: self.cutoff_budget / 10.0,
            tail_tol: self.tail_tol,
            ..Default::default()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phase_grid_is_antisymmetric() {
        let p = PhiGrid {
            min: -FRAC_PI_2,
            max: FRAC_PI_2,
            steps: 1001,
        }
        .points();
        assert_eq!(p.len(), 1001);
        assert_eq!(p[500], 0.0);
        assert_eq!(p[0], -FRAC_PI_2);
        assert_eq!(p[1000], FRAC_PI_2);
        for i in 0..p.len() {
            assert_eq!(p[i], -p[1000 - i]);
        }
    }

    #[test]
    fn defaults_validate() {
        for c in [
            Command::Fig2,
            Command::Fig3,
            Command::Fig4,
            Command::Validate,
            Command::Eval,
        ] {
            RunConfig::new(c).validate().unwrap();
        }
    }

    #[test]
    fn rejects_bad_tolerances_and_empty_grids() {
        let mut c = RunConfig::new(Command::Fig2);
        c.tail_tol = 0.0;
        assert!(c.validate().is_err());
        c.tail_tol = 2e-3;
        assert!(c.validate().is_err());
        let mut c = RunConfig::new(Command::Fig3);
        c.fock_numbers.clear();
        assert!(c.validate().is_err());
        let mut c = RunConfig::new(Command::Fig3);
        c.gains = vec![-0.1];
        assert!(c.validate().is_err());
    }
}
