//! Figure tables, closed-form validation and single-point evaluation for
//! an SU(1,1) interferometer with a Fock state in one arm.
//!
//! The `su11` binary is a thin layer over [`run_fig2`], [`run_fig3`],
//! [`run_fig4`], [`run_validate`] and [`evaluate`].

pub mod budget;
pub mod config;
pub mod error;
pub mod eval;
pub mod figures;
pub mod grid;
pub mod output;
pub mod row;
pub mod validate;

pub use budget::solve_na_for_budget;
pub use config::{Command, InputKind, OutputFormat, PhiGrid, RunConfig};
pub use error::{Result, SweepError, EXIT_FAILURE, EXIT_INVALID, EXIT_OK};
pub use eval::{evaluate, EvalArgs, EvalOutput, EvalValue};
pub use figures::{run_fig2, run_fig3, run_fig4};
pub use row::{RowStatus, SweepRow, SWEEP_COLUMNS};
pub use validate::{run_validate, run_validate_with, ClosedForms, EquationReport, Library, ValidationReport};
