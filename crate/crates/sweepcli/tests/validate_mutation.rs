use su11_core::Result as CoreResult;
use su11_sweep::{run_validate, run_validate_with, ClosedForms, Command, RunConfig};

struct FlippedFockParity;

impl ClosedForms for FlippedFockParity {
    fn parity_fock_fock(&self, m: usize, n: usize, g: f64, phi: f64) -> CoreResult<f64> {
        Ok(-su11_core::closedform::parity_fock_fock(m, n, g, phi)?)
    }
}

struct FlippedThermalPhase;

impl ClosedForms for FlippedThermalPhase {
    fn parity_thermal_fock(&self, mean: f64, n: usize, g: f64, phi: f64) -> CoreResult<f64> {
        // odd-in-phi corruption, invisible at phi = 0
        Ok(su11_core::closedform::parity_thermal_fock(mean, n, g, phi)? + phi.sin() * 1e-3)
    }
}

fn small() -> RunConfig {
    let mut c = RunConfig::new(Command::Validate);
    c.gains = vec![0.5];
    c.fock_numbers = vec![0, 1];
    c.mean_a = vec![0.5];
    c.phi.steps = 3;
    c
}

#[test]
fn library_passes() {
    let report = run_validate(&small()).unwrap();
    assert!(report.passed(), "{report:?}");
    assert_eq!(report.equations.len(), 10);
}

#[test]
fn sign_flip_is_caught_and_localized() {
    let report = run_validate_with(&small(), &FlippedFockParity).unwrap();
    let failed: Vec<&str> = report.failures().collect();
    assert_eq!(failed, ["parity_fock_fock"]);
    let worst = &report.equations["parity_fock_fock"];
    assert!(worst.max_abs_err > 1.0);
    assert!(worst.worst_params.contains_key("m") && worst.worst_params.contains_key("phi"));
}

#[test]
fn phase_odd_corruption_is_caught() {
    let report = run_validate_with(&small(), &FlippedThermalPhase).unwrap();
    let failed: Vec<&str> = report.failures().collect();
    assert_eq!(failed, ["parity_thermal_fock"]);
    assert_ne!(report.equations["parity_thermal_fock"].worst_params["phi"], 0.0);
}
