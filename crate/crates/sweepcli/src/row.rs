use serde::Serialize;

/// How a row's derived columns came out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Ok,
    /// Sensitivity requested at `φ = 0` and evaluated at the limit phase.
    Limit,
    /// Parity slope below resolution; sensitivity is null.
    ZeroSlope,
    /// The photon budget cannot host this point; derived columns are null.
    Infeasible,
    /// Zero Fisher information (`g = 0`); the bound is null.
    NoInformation,
}

impl RowStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RowStatus::Ok => "ok",
            RowStatus::Limit => "limit",
            RowStatus::ZeroSlope => "zero_slope",
            RowStatus::Infeasible => "infeasible",
            RowStatus::NoInformation => "no_information",
        }
    }
}

/// One record of a sweep. Columns that do not apply, or could not be
/// computed, are `None`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub g: f64,
    pub theta: f64,
    pub phi: Option<f64>,
    pub n: usize,
    pub na: Option<f64>,
    pub input_kind: &'static str,
    pub n_tot: f64,
    pub qfi: Option<f64>,
    pub qcrb: Option<f64>,
    pub snl: Option<f64>,
    pub hl: Option<f64>,
    pub parity: Option<f64>,
    pub sensitivity: Option<f64>,
    /// Figure panel (`a`, `b`) or empty.
    pub series: &'static str,
    pub status: RowStatus,
}

/// Column order of every emitted table.
pub const SWEEP_COLUMNS: [&str; 15] = [
    "g",
    "theta",
    "phi",
    "n",
    "na",
    "input_kind",
    "n_tot",
    "qfi",
    "qcrb",
    "snl",
    "hl",
    "parity",
    "sensitivity",
    "series",
    "status",
];

/// A cell before formatting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell<'a> {
    Real(Option<f64>),
    Count(usize),
    Text(&'a str),
}

impl SweepRow {
    pub fn cells(&self) -> [Cell<'_>; 15] {
        use Cell::*;
        [
            Real(Some(self.g)),
            Real(Some(self.theta)),
            Real(self.phi),
            Count(self.n),
            Real(self.na),
            Text(self.input_kind),
            Real(Some(self.n_tot)),
            Real(self.qfi),
            Real(self.qcrb),
            Real(self.snl),
            Real(self.hl),
            Real(self.parity),
            Real(self.sensitivity),
            Text(self.series),
            Text(self.status.as_str()),
        ]
    }
}
