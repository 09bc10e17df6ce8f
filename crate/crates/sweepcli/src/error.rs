use thiserror::Error;

/// Failures of a sweep run, grouped by the exit code they map to.
#[derive(Debug, Error)]
pub enum SweepError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] su11_core::Error),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = SweepError> = std::result::Result<T, E>;

/// Process exit status for a successful run.
pub const EXIT_OK: i32 = 0;
/// Validation failed, or the run broke down while computing.
pub const EXIT_FAILURE: i32 = 1;
/// Bad flags, bad parameters or an infeasible photon budget.
pub const EXIT_INVALID: i32 = 2;

impl SweepError {
    pub fn exit_code(&self) -> i32 {
        use su11_core::Error as E;
        match self {
            SweepError::Config(_) => EXIT_INVALID,
            SweepError::Core(
                E::InvalidParameter { .. }
                | E::BudgetInfeasible { .. }
                | E::UnnormalizedWeights { .. }
                | E::NegativeWeight { .. }
                | E::InvalidDensity(_),
            ) => EXIT_INVALID,
            _ => EXIT_FAILURE,
        }
    }
}

pub(crate) fn config_error(message: impl Into<String>) -> SweepError {
    SweepError::Config(message.into())
}
