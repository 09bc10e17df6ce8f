//! SU(1,1) interferometry with phase-averaged inputs: analytic parity
//! signals and Fisher information, plus a brute-force Fock-space simulator
//! that checks them.
//!
//! The routines are generic over [`Scalar`] (`f32` or `f64`). The aliases
//! at the crate root fix the scalar to `f64`, with `*32` variants for `f32`.

pub mod closedform;
pub mod error;
pub mod fockoracle;
pub mod scalar;
pub mod special;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type InterferometerConfig = closedform::InterferometerConfig<f64>;
pub type InterferometerConfig32 = closedform::InterferometerConfig<f32>;
pub type ModeAState = closedform::ModeAState<f64>;
pub type ModeAState32 = closedform::ModeAState<f32>;
pub type InputSpec = closedform::InputSpec<f64>;
pub type InputSpec32 = closedform::InputSpec<f32>;
pub type DiagonalWeights = closedform::DiagonalWeights<f64>;
pub type McdCoefficients = closedform::McdCoefficients<f64>;
pub type Sensitivity = closedform::Sensitivity<f64>;
pub use closedform::PhaseMode;
